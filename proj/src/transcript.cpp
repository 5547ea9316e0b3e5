#include "qaes/transcript.hpp"

#include <json.hpp>

namespace qaes {

void Transcript::record(std::string_view channel, std::string_view from, std::string_view to, std::string_view kind,
                        const std::string& summary_json) {
    nlohmann::ordered_json line;
    line["seq"] = seq_++;
    line["channel"] = channel;
    line["from"] = from;
    line["to"] = to;
    line["kind"] = kind;
    line["summary"] = nlohmann::ordered_json::parse(summary_json);
    *out_ << line.dump() << '\n';
}

}  // namespace qaes
