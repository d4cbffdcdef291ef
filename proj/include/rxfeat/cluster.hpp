#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "rxfeat/matcher.hpp"

namespace rxfeat {

using Point2 = std::array<double, 2>;

struct Embedding2D {
  std::vector<Point2> points;
  std::string method;
  std::string source_fingerprint;
  /// Variance captured by each axis (PCA only; descending).
  std::array<double, 2> explained_variance{0.0, 0.0};
};

/// Any reducer from feature vectors to the plane.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::string_view name() const = 0;
  virtual Embedding2D embed(const FeatureMatrix& matrix) const = 0;
};

/// Top-2 principal components of the mean-centred rows. Each component's
/// largest-magnitude loading is made positive.
class PcaEmbedder final : public Embedder {
 public:
  std::string_view name() const override { return "pca"; }
  Embedding2D embed(const FeatureMatrix& matrix) const override;
};

/// Throws Error(RankZero) when every row is identical, InvalidArgument when
/// there are fewer than 3 rows or 2 columns.
Embedding2D pca_embed(const Eigen::MatrixXd& rows);
Embedding2D pca_embed(const FeatureMatrix& matrix);

inline constexpr int kNoise = -1;

struct ClusterResult {
  std::vector<int> assignment;  // cluster id or kNoise
  double eps = 0.0;
  std::size_t min_pts = 0;
  std::size_t cluster_count = 0;
};

/// 5% of the bounding-box diagonal (tiny positive floor for degenerate boxes).
double default_eps(const std::vector<Point2>& points);
inline constexpr std::size_t kDefaultMinPts = 5;

/// Closed eps-neighbourhoods counting the point itself. Cluster ids follow
/// discovery order over ascending point index; a border point belongs to
/// the first cluster that reaches it.
ClusterResult dbscan(const std::vector<Point2>& points, double eps, std::size_t min_pts);

nlohmann::json cluster_result_to_json(const ClusterResult& result);

/// Maximum-weight assignment of rows to columns on a rectangular matrix.
/// Returns, per row, its column or -1 when the row is left unassigned.
std::vector<int> max_weight_assignment(const std::vector<std::vector<long long>>& weights);

struct AssignmentResult {
  std::map<int, std::string> mapping;  // cluster id -> label
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy = 0.0;
};

/// Noise points count as wrong. Throws Error(AllNoise) or LengthMismatch.
AssignmentResult best_match_accuracy(const ClusterResult& clusters,
                                     const std::vector<std::string>& gold);

/// `sample_id,x,y,label`; empty label when absent.
std::string embedding_csv(const Embedding2D& embedding, const std::vector<std::string>& sample_ids,
                          const std::vector<std::optional<std::string>>& labels);

struct EmbeddingTable {
  std::vector<std::string> sample_ids;
  Embedding2D embedding;
  std::vector<std::optional<std::string>> labels;
};
EmbeddingTable parse_embedding_csv(std::string_view csv);

}  // namespace rxfeat
