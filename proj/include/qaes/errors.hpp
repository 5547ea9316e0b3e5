#pragma once

#include <stdexcept>
#include <string>

namespace qaes {

// Every library failure derives from Error so callers (the CLI in
// particular) can map each class onto its own exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define QAES_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                   \
    public:                                                       \
        explicit Name(const std::string& what) : Error(what) {}   \
    }

QAES_DEFINE_ERROR(InvalidArgument);
QAES_DEFINE_ERROR(InvalidKeyLength);
QAES_DEFINE_ERROR(LengthMismatch);
QAES_DEFINE_ERROR(EmptyInput);
QAES_DEFINE_ERROR(ExhaustionLimit);
QAES_DEFINE_ERROR(KeyStreamExhausted);
QAES_DEFINE_ERROR(BadPadding);
QAES_DEFINE_ERROR(HeaderMismatch);
QAES_DEFINE_ERROR(SequenceTooShort);
QAES_DEFINE_ERROR(PrerequisiteFailed);
QAES_DEFINE_ERROR(IoError);

#undef QAES_DEFINE_ERROR

// Raised when the estimated quantum bit error rate exceeds the abort
// threshold, i.e. the session must be treated as eavesdropped.
class QberAbort : public Error {
public:
    QberAbort(double qber, double threshold)
        : Error("QBER " + std::to_string(qber) + " exceeds abort threshold " +
                std::to_string(threshold) + "; possible eavesdropping, session aborted"),
          qber_(qber), threshold_(threshold) {}

    double qber() const noexcept { return qber_; }
    double threshold() const noexcept { return threshold_; }

private:
    double qber_;
    double threshold_;
};

}  // namespace qaes
