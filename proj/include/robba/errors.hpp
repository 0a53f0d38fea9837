#ifndef ROBBA_ERRORS_HPP
#define ROBBA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace robba {

// Every failure mode of the library is a subclass of Error carrying a
// stable code string; the CLI maps codes to exit statuses.
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string &what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string &code() const { return code_; }

  private:
    std::string code_;
};

#define ROBBA_DEFINE_ERROR(Name)                                               \
    class Name : public Error {                                                \
      public:                                                                  \
        explicit Name(const std::string &what) : Error(#Name, what) {}         \
    }

ROBBA_DEFINE_ERROR(ContextMismatch);
ROBBA_DEFINE_ERROR(ZeroElement);
ROBBA_DEFINE_ERROR(ZeroDivisor);
ROBBA_DEFINE_ERROR(NotAUnit);
ROBBA_DEFINE_ERROR(PrecisionExhausted);
ROBBA_DEFINE_ERROR(WindowOverflow);
ROBBA_DEFINE_ERROR(BadOverlap);
ROBBA_DEFINE_ERROR(SingularAtPrecision);
ROBBA_DEFINE_ERROR(NotCoprime);
ROBBA_DEFINE_ERROR(DetHasSlopes);
ROBBA_DEFINE_ERROR(EndpointMismatch);
ROBBA_DEFINE_ERROR(HypothesisFailed);
ROBBA_DEFINE_ERROR(NoCyclicVectorFound);
ROBBA_DEFINE_ERROR(NegativeSupport);
ROBBA_DEFINE_ERROR(SingularSpecialization);
ROBBA_DEFINE_ERROR(NonIntegralMatrix);
ROBBA_DEFINE_ERROR(ParseError);
ROBBA_DEFINE_ERROR(InvariantViolation);

#undef ROBBA_DEFINE_ERROR

} // namespace robba

#endif
