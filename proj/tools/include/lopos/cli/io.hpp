#ifndef LOPOS_CLI_IO_HPP_
#define LOPOS_CLI_IO_HPP_

// JSON encodings of quantales, sites, coverages and presheaves. Every
// reader throws lopos::Error; malformed documents use ParseError with the
// origin and, for syntax errors, the line and column.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "lopos/coverage.hpp"
#include "lopos/presheaf.hpp"
#include "lopos/quantale.hpp"

namespace lopos::io {

  using nlohmann::json;

  struct Document {
    std::string origin;
    std::string bytes;
    json        value;
  };

  Document      read_document(std::filesystem::path const& path);
  json          parse_json(std::string_view text, std::string const& origin);
  std::uint64_t fnv1a64(std::string_view bytes);
  std::string   hash_hex(std::string_view bytes);

  // { "elements": [...], "leq": [[a, b], ...], "mul": {"a,b": "c", ...},
  //   "unit": "e" }; `mul` may also be a matrix of labels.
  QuantaleSpec quantale_spec_from_json(json const& j);
  json         to_json(QuantaleSpec const& spec);

  // A quantale spec, {"standard": NAME, "param": n}, or
  // {"product": [site, site]}.
  QuantalePtr site_from_json(json const& j);

  // Short names: luk3, truncnat3, zmod4, zmod12, pow2, chain2 ... chain5.
  std::optional<QuantalePtr> site_alias(std::string_view name);

  // {"canonical": true}, {"trivial": true}, {"covers": [...]} or
  // {"product": [coverage, coverage]}, each with optional "cap", "flavor",
  // "add" and "remove". A cover is {"target": u, "legs": [leg, ...]} where
  // a leg is a label or {"dom": label, "mor": name}.
  Coverage                      coverage_from_json(QuantalePtr const& site, json const& j);
  std::optional<CoverageFlavor> declared_flavor(json const& j);
  json                          to_json(Coverage const& c);

  // {"name": ..., "at": {u: [s, ...]}, "res": {"v<=u": {s: t}}}, or
  // {"terminal": true}, {"empty": true}, {"representable": u}.
  PresheafSpec presheaf_spec_from_json(QuantalePtr const& site, json const& j);
  // Throws the kind of the first validation problem.
  Presheaf     presheaf_from_json(QuantalePtr const& site, json const& j);
  json         to_json(PresheafSpec const& spec);
  json         to_json(Presheaf const& f);

  std::optional<CoverageFlavor> flavor_from_string(std::string_view s);

}  // namespace lopos::io

#endif  // LOPOS_CLI_IO_HPP_
