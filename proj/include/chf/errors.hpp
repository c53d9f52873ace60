#pragma once

#include <stdexcept>
#include <string>

namespace chf {

// Base of every error raised by the library. `kind()` is the stable tag
// written into structured CLI error reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define CHF_DEFINE_ERROR(Name, tag)                                        \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& what) : Error(tag, what) {}       \
    };

CHF_DEFINE_ERROR(PoleError, "pole")
CHF_DEFINE_ERROR(DomainError, "domain")
CHF_DEFINE_ERROR(ConvergenceError, "convergence")
CHF_DEFINE_ERROR(RealnessError, "realness")
CHF_DEFINE_ERROR(SingularMatrixError, "singular_matrix")
CHF_DEFINE_ERROR(RegimeError, "regime")
CHF_DEFINE_ERROR(StepUnderflowError, "step_underflow")
CHF_DEFINE_ERROR(OverflowError, "overflow")
CHF_DEFINE_ERROR(ConfigError, "config")
CHF_DEFINE_ERROR(IoError, "io")

#undef CHF_DEFINE_ERROR

}  // namespace chf
