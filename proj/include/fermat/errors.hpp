#pragma once

#include <stdexcept>
#include <string>

namespace fermat {

// Every failure raised by the library derives from Error so callers can
// report it uniformly; the subclasses name the contract that was violated.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define FERMAT_DEFINE_ERROR(Name)                                          \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

FERMAT_DEFINE_ERROR(DegreeMismatch);
FERMAT_DEFINE_ERROR(ZeroInput);
FERMAT_DEFINE_ERROR(SingularPoint);
FERMAT_DEFINE_ERROR(NotOnCurve);
FERMAT_DEFINE_ERROR(TruncationExhausted);
FERMAT_DEFINE_ERROR(GenericityFailure);
FERMAT_DEFINE_ERROR(ResultantZero);
FERMAT_DEFINE_ERROR(HessianVanishes);
FERMAT_DEFINE_ERROR(NonOrdinary);
FERMAT_DEFINE_ERROR(NoFixedLine);
FERMAT_DEFINE_ERROR(FewerPoints);
FERMAT_DEFINE_ERROR(CertificationFailure);

#undef FERMAT_DEFINE_ERROR

// Raised when an extended-gcd inversion meets a non-unit common factor.
// `factor` is the discovered factor in human-readable form.
class ZeroDivisor : public Error {
public:
    ZeroDivisor(const std::string& where, std::string factor)
        : Error("ZeroDivisor: " + where + ": common factor " + factor),
          factor_(std::move(factor)) {}

    const std::string& factor() const noexcept { return factor_; }

private:
    std::string factor_;
};

} // namespace fermat
