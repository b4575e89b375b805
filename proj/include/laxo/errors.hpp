#pragma once

#include <stdexcept>
#include <string>

namespace laxo {

// Every library failure carries a short machine tag ("BracketError", ...)
// so the CLI can map it to an exit code without string matching.
class Error : public std::runtime_error {
public:
    Error(std::string tag, const std::string& msg)
        : std::runtime_error(msg), tag_(std::move(tag)) {}
    const std::string& tag() const noexcept { return tag_; }
    // numerical sentinels map to exit code 3, everything else is a usage error
    virtual bool sentinel() const noexcept { return false; }

private:
    std::string tag_;
};

#define LAXO_ERROR(Name, is_sentinel)                                         \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& msg) : Error(#Name, msg) {}          \
        bool sentinel() const noexcept override { return is_sentinel; }       \
    };

LAXO_ERROR(BracketError, true)
LAXO_ERROR(FitError, true)
LAXO_ERROR(UnsupportedTail, false)
LAXO_ERROR(CriterionInconclusive, true)
LAXO_ERROR(ConditionFailed, true)
LAXO_ERROR(RootNotBracketed, true)
LAXO_ERROR(LostCurve, true)
LAXO_ERROR(HullInfinite, true)
LAXO_ERROR(NoDivides, true)
LAXO_ERROR(CflViolation, true)
LAXO_ERROR(ParseError, false)

#undef LAXO_ERROR

} // namespace laxo
