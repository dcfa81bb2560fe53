#include "lopos/error.hpp"

namespace lopos {

  std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
      case ErrorKind::DomainMismatch:
        return "DomainMismatch";
      case ErrorKind::CodomainMismatch:
        return "CodomainMismatch";
      case ErrorKind::DuplicateLabel:
        return "DuplicateLabel";
      case ErrorKind::UnknownLabel:
        return "UnknownLabel";
      case ErrorKind::InvalidMap:
        return "InvalidMap";
      case ErrorKind::NotAPoset:
        return "NotAPoset";
      case ErrorKind::NotComplete:
        return "NotComplete";
      case ErrorKind::NotSemicartesian:
        return "NotSemicartesian";
      case ErrorKind::NotCartesianSite:
        return "NotCartesianSite";
      case ErrorKind::NotThinSite:
        return "NotThinSite";
      case ErrorKind::NotLocale:
        return "NotLocale";
      case ErrorKind::SiteMismatch:
        return "SiteMismatch";
      case ErrorKind::UnsupportedParam:
        return "UnsupportedParam";
      case ErrorKind::UnverifiedInput:
        return "UnverifiedInput";
      case ErrorKind::MissingRestriction:
        return "MissingRestriction";
      case ErrorKind::CompositionFails:
        return "CompositionFails";
      case ErrorKind::SectionOutOfSet:
        return "SectionOutOfSet";
      case ErrorKind::NotCompatible:
        return "NotCompatible";
      case ErrorKind::MulNotAssociative:
        return "MulNotAssociative";
      case ErrorKind::ParseError:
        return "ParseError";
      case ErrorKind::SearchLimit:
        return "SearchLimit";
      case ErrorKind::NotConverged:
        return "NotConverged";
      case ErrorKind::Internal:
        return "Internal";
    }
    return "Unknown";
  }

}  // namespace lopos
