#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace qaes {

// Line-delimited JSON log of protocol messages, one object per message:
//   {"seq":3,"channel":"classical","from":"receiver","to":"sender",
//    "kind":"bases","summary":{"count":320}}
// Contains no wall-clock data, so seeded sessions give identical transcripts.
class Transcript {
public:
    explicit Transcript(std::ostream& out) : out_(&out) {}

    // summary_json must be a serialized JSON object.
    void record(std::string_view channel, std::string_view from, std::string_view to, std::string_view kind,
                const std::string& summary_json);

    std::uint64_t records() const { return seq_; }

private:
    std::ostream* out_;
    std::uint64_t seq_ = 0;
};

}  // namespace qaes
