#pragma once

#include <stdexcept>
#include <string>

namespace idms {

// File could not be read/written or its contents do not match the format.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A constructed value would violate a type invariant (bad diagonal,
// duplicate label, hour out of range, ...).
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An ASN was used that is not present in the matrix label set.
struct UnknownAsn : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An IP has no longest-prefix match in the mapping table; joins are refused.
struct UnmappedIp : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two matrices that must share a label set do not.
struct LabelMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A protocol run could not complete (e.g. an AS has no supernode).
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace idms
