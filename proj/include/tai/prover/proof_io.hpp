#pragma once

#include <string>
#include <string_view>

#include "tai/prover/proof.hpp"

namespace tai::prover {

/// Line-delimited JSON: a header record, then one record per node in
/// post-order with fields {id, rule, conclusion, premises, side}.
std::string serialize_proof(const Proof& p);

/// Inverse of serialize_proof. Throws FormatError, or the parser's errors for
/// conclusions that do not read over `sig`.
Proof parse_proof(std::string_view text, const Signature& sig);

}  // namespace tai::prover
