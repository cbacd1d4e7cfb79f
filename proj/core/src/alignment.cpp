#include "crosslex/alignment.hpp"

#include <Eigen/SVD>

#include <set>
#include <stdexcept>

#include "crosslex/io.hpp"

namespace crosslex {

namespace {

void require_normalized(const EmbeddingSpace& space, const char* role) {
  if (!space.normalized) {
    throw std::invalid_argument(std::string(role) + " space '" + space.language_tag +
                                "' must be normalized before alignment");
  }
}

}  // namespace

AnchorSet load_anchors(const std::filesystem::path& path) {
  AnchorSet anchors;
  anchors.provenance = path.string();
  std::set<std::pair<std::string, std::string>> seen;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(i + 1) +
                               ": expected 'source<TAB>target'");
    }
    std::pair<std::string, std::string> pair{std::string(fields[0]), std::string(fields[1])};
    if (!seen.insert(pair).second) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(i + 1) +
                               ": duplicate anchor pair '" + pair.first + "\t" + pair.second + "'");
    }
    anchors.pairs.push_back(std::move(pair));
  }
  return anchors;
}

AnchorSet filter_anchors(const AnchorSet& anchors, const EmbeddingSpace& source,
                         const EmbeddingSpace& target) {
  AnchorSet out;
  out.provenance = anchors.provenance;
  for (const auto& pair : anchors.pairs) {
    if (source.find(pair.first) && target.find(pair.second)) out.pairs.push_back(pair);
  }
  if (out.pairs.empty()) {
    throw std::runtime_error("anchor filtering: none of the " + std::to_string(anchors.pairs.size()) +
                             " pairs exists in both spaces ('" + source.language_tag + "' -> '" +
                             target.language_tag + "')");
  }
  return out;
}

AlignmentMatrix solve_procrustes(const AnchorSet& anchors, const EmbeddingSpace& source,
                                 const EmbeddingSpace& target) {
  require_normalized(source, "source");
  require_normalized(target, "target");
  if (source.dim() != target.dim()) {
    throw std::invalid_argument("procrustes: dimension mismatch, source d=" +
                                std::to_string(source.dim()) + " vs target d=" +
                                std::to_string(target.dim()));
  }
  if (anchors.pairs.empty()) {
    throw std::invalid_argument("procrustes: need at least one anchor pair");
  }
  const int d = source.dim();
  const int n = static_cast<int>(anchors.pairs.size());

  Matrix src_stack(n, d), tgt_stack(n, d);
  for (int i = 0; i < n; ++i) {
    const auto& [sw, tw] = anchors.pairs[i];
    auto si = source.find(sw);
    auto ti = target.find(tw);
    if (!si) throw std::invalid_argument("procrustes: anchor source word '" + sw + "' not in space");
    if (!ti) throw std::invalid_argument("procrustes: anchor target word '" + tw + "' not in space");
    src_stack.row(i) = source.vectors.row(*si);
    tgt_stack.row(i) = target.vectors.row(*ti);
  }

  const Matrix m = src_stack.transpose() * tgt_stack;  // d x d
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);

  AlignmentMatrix out;
  out.matrix = svd.matrixU() * svd.matrixV().transpose();
  out.source_tag = source.language_tag;
  out.target_tag = target.language_tag;
  out.anchor_count = n;
  return out;
}

BilingualSpace build_bilingual_space(const EmbeddingSpace& source, const EmbeddingSpace& target,
                                     const AlignmentMatrix& transform) {
  require_normalized(source, "source");
  require_normalized(target, "target");
  if (source.dim() != target.dim() || transform.dim() != source.dim()) {
    throw std::invalid_argument("bilingual space: dimension mismatch between spaces (" +
                                std::to_string(source.dim()) + ", " + std::to_string(target.dim()) +
                                ") and transform (" + std::to_string(transform.dim()) + ")");
  }
  const int d = source.dim();
  const int n_src = source.size();
  const int n_tgt = target.size();

  std::vector<std::string> words;
  std::vector<std::string> tags;
  words.reserve(n_src + n_tgt);
  tags.reserve(n_src + n_tgt);
  Matrix vectors(n_src + n_tgt, d);
  vectors.topRows(n_src) = source.vectors * transform.matrix;
  vectors.bottomRows(n_tgt) = target.vectors;
  for (int i = 0; i < n_src; ++i) {
    words.push_back(source.words[i]);
    tags.push_back(source.language_tag);
  }
  for (int i = 0; i < n_tgt; ++i) {
    words.push_back(target.words[i]);
    tags.push_back(target.language_tag);
  }
  return BilingualSpace::create(std::move(words), std::move(tags), std::move(vectors), true);
}

void save_alignment(const AlignmentMatrix& transform, const std::filesystem::path& path) {
  const int d = transform.dim();
  std::string out = std::to_string(d);
  out += '\n';
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (j) out += ' ';
      out += format_double(transform.matrix(i, j));
    }
    out += '\n';
  }
  write_file(path, out);
}

AlignmentMatrix load_alignment(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path.string() + ": empty alignment file");
  const std::int64_t d = parse_count(lines[0], path.string() + ": header");
  if (d < 1) throw std::runtime_error(path.string() + ": dimension must be >= 1");
  if (static_cast<std::int64_t>(lines.size()) - 1 < d) {
    throw std::runtime_error(path.string() + ": expected " + std::to_string(d) + " matrix rows");
  }
  AlignmentMatrix out;
  out.matrix.resize(d, d);
  for (std::int64_t i = 0; i < d; ++i) {
    auto fields = split(lines[i + 1], ' ');
    if (static_cast<std::int64_t>(fields.size()) != d) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(i + 2) + ": expected " +
                               std::to_string(d) + " values");
    }
    for (std::int64_t j = 0; j < d; ++j) {
      out.matrix(i, j) = parse_double(fields[j], path.string() + " line " + std::to_string(i + 2));
    }
  }
  const double defect = orthogonality_defect(out.matrix);
  if (defect > 1e-6 * static_cast<double>(d)) {
    throw std::runtime_error(path.string() + ": matrix is not orthogonal (|L^T L - I|_F = " +
                             format_double(defect) + ")");
  }
  return out;
}

double orthogonality_defect(const Matrix& m) {
  const Matrix gram = m.transpose() * m;
  const Matrix eye = Matrix::Identity(m.rows(), m.cols());
  return (gram - eye).norm();
}

}  // namespace crosslex
