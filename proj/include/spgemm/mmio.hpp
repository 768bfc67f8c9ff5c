#pragma once

#include <iosfwd>
#include <string>

#include "spgemm/types.hpp"

namespace spgemm {

// Matrix Market coordinate reader. Accepts real/integer/pattern fields and
// general/symmetric symmetry; symmetric storage is expanded to both
// triangles (diagonal entries kept single), pattern entries get value 1.0.
// Indices come in 1-based and leave 0-based. Malformed input throws
// parse_error with the offending line number.
CooMatrix mm_read(const std::string& path);
CooMatrix mm_read(std::istream& in, const std::string& name = "<stream>");

// Writes coordinate/real/general. mm_read(mm_write(m)) reproduces m up to
// entry ordering.
void mm_write(const CooMatrix& m, const std::string& path);
void mm_write(const CooMatrix& m, std::ostream& out);

}  // namespace spgemm
