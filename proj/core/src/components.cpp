#include "projray/components.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace projray {

namespace {

void require_family(const std::vector<Ray>& rays, double tol_orth) {
  if (rays.empty()) {
    throw PreconditionError("empty_family", "need at least one ray");
  }
  if (tol_orth < 0.0) {
    throw PreconditionError("invalid_tolerance",
                            "orthogonality tolerance must be non-negative",
                            {{"tol_orth", tol_orth}});
  }
  const Eigen::Index dim = rays.front().dim();
  for (const Ray& r : rays) {
    if (r.dim() != dim) {
      throw PreconditionError("dimension_mismatch",
                              "rays live in different dimensions");
    }
  }
}

Matrix orthonormal_span(const std::vector<Ray>& rays,
                        const std::vector<int>& indices) {
  const Eigen::Index n = rays.front().dim();
  Matrix stacked(n, static_cast<Eigen::Index>(indices.size()));
  for (std::size_t c = 0; c < indices.size(); ++c) {
    stacked.col(static_cast<Eigen::Index>(c)) = rays[indices[c]].rep();
  }
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
  const RealVector sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-10 * sv(0)) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

}  // namespace

RayGraph build_ray_graph(const std::vector<Ray>& rays, double tol_orth) {
  require_family(rays, tol_orth);
  const int m = static_cast<int>(rays.size());
  RayGraph graph{rays, std::vector<std::vector<int>>(rays.size()), tol_orth};
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double overlap = std::abs(inner(rays[i].rep(), rays[j].rep()));
      if (overlap > tol_orth) {
        graph.adjacency[i].push_back(j);
        graph.adjacency[j].push_back(i);
      }
    }
  }
  return graph;
}

ComponentDecomposition indecomposable_components(const std::vector<Ray>& rays,
                                                 double tol_orth) {
  const RayGraph graph = build_ray_graph(rays, tol_orth);
  const int m = static_cast<int>(rays.size());

  ComponentDecomposition result;
  std::vector<int> label(rays.size(), -1);
  for (int start = 0; start < m; ++start) {
    if (label[start] != -1) continue;
    const int id = static_cast<int>(result.components.size());
    std::vector<int> members;
    std::queue<int> frontier;
    frontier.push(start);
    label[start] = id;
    while (!frontier.empty()) {
      const int at = frontier.front();
      frontier.pop();
      members.push_back(at);
      for (int next : graph.adjacency[at]) {
        if (label[next] == -1) {
          label[next] = id;
          frontier.push(next);
        }
      }
    }
    std::sort(members.begin(), members.end());
    result.components.push_back(
        Component{members, orthonormal_span(rays, members)});
  }

  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double overlap = std::abs(inner(rays[i].rep(), rays[j].rep()));
      if (label[i] == label[j] && overlap > tol_orth) {
        result.min_coupling = std::min(result.min_coupling, overlap);
      }
      if (label[i] != label[j]) {
        result.cross_residual = std::max(result.cross_residual, overlap);
      }
    }
  }
  return result;
}

bool is_indecomposable(const std::vector<Ray>& rays, double tol_orth) {
  return indecomposable_components(rays, tol_orth).components.size() == 1;
}

bool is_total(const std::vector<Ray>& rays, Eigen::Index n,
              double rel_threshold) {
  require_family(rays, 0.0);
  if (rays.front().dim() != n) {
    throw PreconditionError("dimension_mismatch",
                            "rays do not live in the stated dimension",
                            {{"expected", static_cast<double>(n)},
                             {"found", static_cast<double>(rays.front().dim())}});
  }
  Matrix stacked(n, static_cast<Eigen::Index>(rays.size()));
  for (std::size_t c = 0; c < rays.size(); ++c) {
    stacked.col(static_cast<Eigen::Index>(c)) = rays[c].rep();
  }
  Eigen::JacobiSVD<Matrix> svd(stacked);
  const RealVector sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_threshold * sv(0)) ++rank;
  }
  return rank == n;
}

}  // namespace projray
