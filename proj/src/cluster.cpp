#include "rxfeat/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

#include "rxfeat/error.hpp"

namespace rxfeat {

// ---------------------------------------------------------------- embedding

Embedding2D pca_embed(const Eigen::MatrixXd& rows) {
  const Eigen::Index n = rows.rows();
  const Eigen::Index d = rows.cols();
  if (n < 3 || d < 2) {
    throw Error(ErrorCode::InvalidArgument, "pca_embed needs >= 3 rows and >= 2 columns");
  }
  bool all_same = true;
  for (Eigen::Index r = 1; r < n && all_same; ++r) all_same = rows.row(r) == rows.row(0);
  if (all_same) throw Error(ErrorCode::RankZero, "all rows are identical");

  const Eigen::RowVectorXd mean = rows.colwise().mean();
  const Eigen::MatrixXd centered = rows.rowwise() - mean;
  const double denom = static_cast<double>(n - 1);

  Eigen::MatrixXd components(d, 2);
  std::array<double, 2> variance{};
  if (d <= n) {
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    for (int k = 0; k < 2; ++k) {
      components.col(k) = eig.eigenvectors().col(d - 1 - k);
      variance[static_cast<std::size_t>(k)] = std::max(0.0, eig.eigenvalues()(d - 1 - k));
    }
  } else {
    // Fewer rows than features: eigenvectors of the Gram matrix map back
    // through the data to the covariance eigenvectors.
    const Eigen::MatrixXd gram = centered * centered.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    for (int k = 0; k < 2; ++k) {
      Eigen::VectorXd v = centered.transpose() * eig.eigenvectors().col(n - 1 - k);
      const double norm = v.norm();
      if (norm > 0.0) v /= norm;
      components.col(k) = v;
      variance[static_cast<std::size_t>(k)] = std::max(0.0, eig.eigenvalues()(n - 1 - k) / denom);
    }
  }
  for (int k = 0; k < 2; ++k) {
    Eigen::Index arg = 0;
    components.col(k).cwiseAbs().maxCoeff(&arg);
    if (components(arg, k) < 0.0) components.col(k) *= -1.0;
  }
  const Eigen::MatrixXd projected = centered * components;

  Embedding2D out;
  out.method = "pca";
  out.explained_variance = variance;
  out.points.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < n; ++r) out.points.push_back({projected(r, 0), projected(r, 1)});
  return out;
}

Embedding2D pca_embed(const FeatureMatrix& matrix) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(matrix.rows.size()),
                    static_cast<Eigen::Index>(matrix.dim()));
  for (std::size_t r = 0; r < matrix.rows.size(); ++r)
    for (std::size_t c = 0; c < matrix.dim(); ++c)
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = matrix.rows[r].values[c];
  Embedding2D e = pca_embed(x);
  e.source_fingerprint = matrix.corpus_fingerprint;
  return e;
}

Embedding2D PcaEmbedder::embed(const FeatureMatrix& matrix) const { return pca_embed(matrix); }

// ------------------------------------------------------------------- dbscan

double default_eps(const std::vector<Point2>& points) {
  if (points.empty()) return 1e-12;
  double lo_x = points[0][0], hi_x = lo_x, lo_y = points[0][1], hi_y = lo_y;
  for (const auto& p : points) {
    lo_x = std::min(lo_x, p[0]);
    hi_x = std::max(hi_x, p[0]);
    lo_y = std::min(lo_y, p[1]);
    hi_y = std::max(hi_y, p[1]);
  }
  return std::max(0.05 * std::hypot(hi_x - lo_x, hi_y - lo_y), 1e-12);
}

namespace {

bool within(const Point2& a, const Point2& b, double eps) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  return dx * dx + dy * dy <= eps * eps;
}

// Uniform grid with cells slightly wider than eps, so every eps-neighbour
// lies in the 3x3 block around a point's cell.
class NeighborIndex {
 public:
  NeighborIndex(const std::vector<Point2>& points, double eps) : points_(points), eps_(eps) {
    cell_ = eps * (1.0 + 1e-6);
    for (const auto& p : points) {
      if (std::abs(p[0]) / cell_ > 1e9 || std::abs(p[1]) / cell_ > 1e9) {
        brute_ = true;
        return;
      }
    }
    for (std::size_t i = 0; i < points.size(); ++i) grid_[key(cell_of(points[i][0]), cell_of(points[i][1]))].push_back(i);
  }

  void neighbors(std::size_t i, std::vector<std::size_t>& out) const {
    out.clear();
    if (brute_) {
      for (std::size_t j = 0; j < points_.size(); ++j)
        if (within(points_[i], points_[j], eps_)) out.push_back(j);
      return;
    }
    const auto cx = cell_of(points_[i][0]);
    const auto cy = cell_of(points_[i][1]);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = grid_.find(key(cx + dx, cy + dy));
        if (it == grid_.end()) continue;
        for (std::size_t j : it->second)
          if (within(points_[i], points_[j], eps_)) out.push_back(j);
      }
    }
  }

 private:
  std::int64_t cell_of(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }
  static std::uint64_t key(std::int64_t x, std::int64_t y) {
    return (static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ULL) ^ static_cast<std::uint64_t>(y);
  }

  const std::vector<Point2>& points_;
  double eps_;
  double cell_ = 1.0;
  bool brute_ = false;
  // Key collisions only add candidates; `within` filters them.
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid_;
};

}  // namespace

ClusterResult dbscan(const std::vector<Point2>& points, double eps, std::size_t min_pts) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be > 0");
  if (min_pts == 0) throw Error(ErrorCode::InvalidArgument, "min_pts must be >= 1");
  const std::size_t n = points.size();
  ClusterResult result;
  result.eps = eps;
  result.min_pts = min_pts;
  result.assignment.assign(n, kNoise);

  NeighborIndex index(points, eps);
  std::vector<std::vector<std::size_t>> hood(n);
  std::vector<char> core(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    index.neighbors(i, hood[i]);
    core[i] = hood[i].size() >= min_pts ? 1 : 0;
  }

  int next_id = 0;
  std::deque<std::size_t> frontier;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (!core[seed] || result.assignment[seed] != kNoise) continue;
    const int id = next_id++;
    result.assignment[seed] = id;
    frontier.push_back(seed);
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      for (std::size_t q : hood[p]) {
        if (result.assignment[q] != kNoise) continue;
        result.assignment[q] = id;
        if (core[q]) frontier.push_back(q);
      }
    }
  }
  result.cluster_count = static_cast<std::size_t>(next_id);
  return result;
}

nlohmann::json cluster_result_to_json(const ClusterResult& r) {
  return {{"eps", r.eps}, {"min_pts", r.min_pts}, {"assignment", r.assignment}};
}

// --------------------------------------------------------------- assignment

std::vector<int> max_weight_assignment(const std::vector<std::vector<long long>>& weights) {
  const std::size_t rows = weights.size();
  std::size_t cols = 0;
  for (const auto& r : weights) cols = std::max(cols, r.size());
  const std::size_t n = std::max(rows, cols);
  if (n == 0) return {};
  long long top = 0;
  for (const auto& r : weights)
    for (long long w : r) top = std::max(top, w);
  auto cost = [&](std::size_t i, std::size_t j) -> long long {
    const long long w = (i < rows && j < weights[i].size()) ? weights[i][j] : 0;
    return top - w;
  };

  // Shortest augmenting path with potentials; 1-based, O(n^3).
  constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(n + 1, 0), v(n + 1, 0), way_min(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(way_min.begin(), way_min.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      long long delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const long long cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < way_min[j]) {
          way_min[j] = cur;
          way[j] = j0;
        }
        if (way_min[j] < delta) {
          delta = way_min[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          way_min[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> out(rows, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = match[j] - 1;
    if (i < rows && j - 1 < cols) out[i] = static_cast<int>(j - 1);
  }
  return out;
}

AssignmentResult best_match_accuracy(const ClusterResult& clusters,
                                     const std::vector<std::string>& gold) {
  if (clusters.assignment.size() != gold.size()) {
    throw Error(ErrorCode::LengthMismatch, "cluster assignment and gold labels differ in length");
  }
  int max_id = -1;
  for (int a : clusters.assignment) max_id = std::max(max_id, a);
  if (max_id < 0) throw Error(ErrorCode::AllNoise, "every point is noise");

  const std::set<std::string> label_set(gold.begin(), gold.end());
  const std::vector<std::string> labels(label_set.begin(), label_set.end());
  std::vector<std::vector<long long>> table(static_cast<std::size_t>(max_id) + 1,
                                            std::vector<long long>(labels.size(), 0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const int c = clusters.assignment[i];
    if (c == kNoise) continue;
    const auto k = static_cast<std::size_t>(
        std::lower_bound(labels.begin(), labels.end(), gold[i]) - labels.begin());
    ++table[static_cast<std::size_t>(c)][k];
  }
  const auto pick = max_weight_assignment(table);
  AssignmentResult out;
  out.total = gold.size();
  for (std::size_t c = 0; c < pick.size(); ++c) {
    if (pick[c] < 0) continue;
    out.mapping[static_cast<int>(c)] = labels[static_cast<std::size_t>(pick[c])];
    out.correct += static_cast<std::size_t>(table[c][static_cast<std::size_t>(pick[c])]);
  }
  out.accuracy = static_cast<double>(out.correct) / static_cast<double>(out.total);
  return out;
}

// ---------------------------------------------------------------------- I/O

std::string embedding_csv(const Embedding2D& embedding, const std::vector<std::string>& sample_ids,
                          const std::vector<std::optional<std::string>>& labels) {
  if (sample_ids.size() != embedding.points.size() ||
      (!labels.empty() && labels.size() != embedding.points.size())) {
    throw Error(ErrorCode::LengthMismatch, "embedding, ids and labels differ in length");
  }
  std::string out = "sample_id,x,y,label\n";
  char buf[80];
  for (std::size_t i = 0; i < embedding.points.size(); ++i) {
    out += csv_escape(sample_ids[i]);
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,", embedding.points[i][0], embedding.points[i][1]);
    out += buf;
    if (!labels.empty() && labels[i]) out += csv_escape(*labels[i]);
    out += '\n';
  }
  return out;
}

EmbeddingTable parse_embedding_csv(std::string_view csv) {
  EmbeddingTable t;
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || csv_split_line(line) != std::vector<std::string>{"sample_id", "x", "y", "label"}) {
    throw Error(ErrorCode::Format, "embedding CSV must start with sample_id,x,y,label");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto f = csv_split_line(line);
    if (f.size() != 4) throw Error(ErrorCode::Format, "embedding CSV line " + std::to_string(line_no) + " needs 4 fields");
    try {
      t.embedding.points.push_back({std::stod(f[1]), std::stod(f[2])});
    } catch (const std::exception&) {
      throw Error(ErrorCode::Format, "embedding CSV line " + std::to_string(line_no) + " has bad coordinates");
    }
    t.sample_ids.push_back(f[0]);
    t.labels.push_back(f[3].empty() ? std::nullopt : std::optional<std::string>(f[3]));
  }
  t.embedding.method = "csv";
  return t;
}

}  // namespace rxfeat
