#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "crosslex/space.hpp"

namespace crosslex {

/// Ordered translation pairs (source_word, target_word) used as alignment
/// supervision. Exact duplicate pairs are rejected on load.
struct AnchorSet {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string provenance;
};

/// TSV: source_word <TAB> target_word; '#' comment lines and blanks ignored.
AnchorSet load_anchors(const std::filesystem::path& path);

/// Keeps exactly the pairs whose source word exists in `source` and target
/// word in `target`, preserving order. Raises if nothing survives.
AnchorSet filter_anchors(const AnchorSet& anchors, const EmbeddingSpace& source,
                         const EmbeddingSpace& target);

/// The d x d orthogonal transform mapping source rows into the target space.
struct AlignmentMatrix {
  Matrix matrix;
  std::string source_tag;
  std::string target_tag;
  int anchor_count = 0;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

/// Stacks the anchor vectors in pair order into V_src and V_tgt, then solves
///   argmin_L |V_src L - V_tgt|_F  s.t.  L^T L = I
/// via the SVD of V_src^T V_tgt = U S V^T, returning L = U V^T. No reflection
/// correction is applied (det L may be -1).
AlignmentMatrix solve_procrustes(const AnchorSet& anchors, const EmbeddingSpace& source,
                                 const EmbeddingSpace& target);

/// Transforms every source row by L and unions the result with the target
/// rows (source rows first). Surface-form collisions across languages stay
/// distinct via the per-row language tag.
BilingualSpace build_bilingual_space(const EmbeddingSpace& source, const EmbeddingSpace& target,
                                     const AlignmentMatrix& transform);

/// Text format: first line "d", then d rows of d floats.
void save_alignment(const AlignmentMatrix& transform, const std::filesystem::path& path);
AlignmentMatrix load_alignment(const std::filesystem::path& path);

/// |L^T L - I|_F, the orthogonality defect checked against 1e-6 * d.
double orthogonality_defect(const Matrix& m);

}  // namespace crosslex
