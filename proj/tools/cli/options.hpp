#pragma once

// Parsing of the textual argument formats accepted by the command line.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "twistleaf/eikonal.hpp"
#include "twistleaf/grid.hpp"
#include "twistleaf/twistor.hpp"
#include "twistleaf/types.hpp"

namespace twistleaf::cli {

/// Bad user input; maps to exit status 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "q:min:max:count,r:min:max:count,s:min:max:count" (axes in any order).
GridSpec parse_grid(std::string_view text);
/// "q,r,s".
Point3 parse_point(std::string_view text);
/// "re,im" or a plain real number.
Complex parse_complex(std::string_view text);
/// "bump:amplitude:radius", "sine:amplitude:frequency[:phase]" or "poly:c0:c1:...".
Profile parse_profile(std::string_view text);
/// Six comma-separated reals per vector, vectors separated by ';'.
std::vector<RealVec6> parse_basis(std::string_view text);

/// Throws ValidationError unless every axis has at least `min_count` nodes.
void require_min_count(const GridSpec& spec, int min_count);

}  // namespace twistleaf::cli
