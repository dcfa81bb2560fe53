#ifndef LOPOS_ERROR_HPP_
#define LOPOS_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace lopos {

  enum class ErrorKind {
    DomainMismatch,
    CodomainMismatch,
    DuplicateLabel,
    UnknownLabel,
    InvalidMap,
    NotAPoset,
    NotComplete,
    NotSemicartesian,
    NotCartesianSite,
    NotThinSite,
    NotLocale,
    SiteMismatch,
    UnsupportedParam,
    UnverifiedInput,
    MissingRestriction,
    CompositionFails,
    SectionOutOfSet,
    NotCompatible,
    MulNotAssociative,
    ParseError,
    SearchLimit,
    NotConverged,
    Internal
  };

  std::string_view to_string(ErrorKind kind) noexcept;

  // All library failures are reported through this one exception type; the
  // kind lets callers (the CLI in particular) map errors onto exit codes.
  class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, std::string const& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what),
          _kind(kind) {}

    ErrorKind kind() const noexcept {
      return _kind;
    }

   private:
    ErrorKind _kind;
  };

}  // namespace lopos

#define LOPOS_THROW(kind, msg) throw ::lopos::Error(::lopos::ErrorKind::kind, (msg))

#define LOPOS_ASSERT(cond)                                                   \
  do {                                                                       \
    if (!(cond)) {                                                           \
      throw ::lopos::Error(::lopos::ErrorKind::Internal,                     \
                           std::string("assertion failed: ") + #cond + " ("  \
                               + __FILE__ + ":" + std::to_string(__LINE__)   \
                               + ")");                                       \
    }                                                                        \
  } while (false)

#endif  // LOPOS_ERROR_HPP_
