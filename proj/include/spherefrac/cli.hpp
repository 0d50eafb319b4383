#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spherefrac/sets.hpp"

namespace spherefrac::cli {

/// Malformed set or function description; the message carries the character position.
class ParseError : public DomainError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : DomainError("parse error at position " + std::to_string(position) + ": " + what), position(position) {}
  std::size_t position;
};

/// Parse the set grammar
///   cap:<x,y,...>:<r> | poly:<u1;u2;...> | union:<desc>+<desc>... | compl:<desc> | refl:<desc>
///   | arcs:<start,len;...> | empty:<n>
/// Vectors off the unit sphere by more than 1e-6 are normalized and reported in `warnings`.
SetHandle parse_set(const std::string& desc, std::vector<std::string>* warnings = nullptr);

struct ParsedFunction {
  std::function<double(const Vec&)> f;
  int dim = -1;                        // −1 when any dimension fits (const:c)
  std::optional<double> lipschitz;     // w.r.t. geodesic distance, when known
  std::string canonical;
};

/// linear:<e> (x·e) | abs:<e> (|x·e|) | const:<c> | indicator:<set>
ParsedFunction parse_function(const std::string& desc, std::vector<std::string>* warnings = nullptr);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(const std::string& bytes);

/// Decimal or 0x-prefixed hexadecimal.
std::optional<std::uint64_t> parse_seed(const std::string& text);

/// Exit codes of run().
enum ExitCode : int { kOk = 0, kUsage = 1, kVerdict = 2, kNumerical = 3 };

/// Full command line entry point; `out` receives stdout-bound output, `err` diagnostics.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spherefrac::cli
