#pragma once

#include <optional>
#include <string>

#include "shifteq/chain.hpp"
#include "shifteq/correspondence.hpp"
#include "shifteq/matrix.hpp"
#include "shifteq/shifts.hpp"

namespace shifteq {

// Versioned on-disk envelope. Exactly one payload member is engaged and it
// matches `kind`. Matrices are stored with cardinal entries so one kind
// covers both ℕ and ℕ ∪ {ω}; consumers that need finite entries convert.
struct ArtifactFile {
    int format_version = 1;
    std::string kind;  // "matrix" | "chain" | "concrete-shift" | "descriptor"
    std::optional<CardMatrix> matrix;
    std::optional<CardChain> chain;
    std::optional<ConcreteShift> shift;
    std::optional<CorrDescriptor> descriptor;
};

ArtifactFile matrix_artifact(const CardMatrix& a);
ArtifactFile matrix_artifact(const NatMatrix& a);
ArtifactFile chain_artifact(const CardChain& c);
ArtifactFile chain_artifact(const SSEChain& c);
ArtifactFile shift_artifact(const ConcreteShift& cs);
ArtifactFile descriptor_artifact(const CorrDescriptor& d);

// Canonical text form: sorted keys, two-space indent, trailing newline.
// Equal values serialize to identical bytes, so artifacts are diffable.
// Entries that fit a 64-bit signed integer are written as JSON numbers,
// larger ones as decimal strings, and ω as the string "w".
std::string serialize_artifact(const ArtifactFile& art);

// Inverse of serialize_artifact. Malformed JSON, unknown kinds or keys, and
// ill-typed fields raise ParseError naming the offending field; payloads that
// parse but violate a type invariant (a non-bijective map table, a chain
// whose products disagree, a zero descriptor dimension) raise
// InvariantViolation naming the invariant.
ArtifactFile parse_artifact(const std::string& text);

ArtifactFile load_artifact(const std::string& path);
void save_artifact(const ArtifactFile& art, const std::string& path);

}  // namespace shifteq
