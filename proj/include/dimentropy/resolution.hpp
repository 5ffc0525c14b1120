#pragma once

// C^r-resolutions by dyadic subdivision, resolution counts and their laws.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimentropy/geometry.hpp"
#include "dimentropy/systems.hpp"

namespace dimentropy {

struct ResolutionOptions {
  double size_tolerance = 1e-9;
  int max_level = 30;  // dyadic halvings per axis
  std::size_t max_nodes = std::size_t{1} << 21;
  int gridres = 17;  // per-node C^r size grid
  double h_fd = 1e-4;
  ChartConvention convention = ChartConvention::UnitInterval;
  int workers = 0;
};

// Word of length `time`: the dyadic sub-cube center + half * Q^k, with
// cr_size(f^time o phi o psi) recorded.
struct ResolutionNode {
  int time = 0;
  int level = 0;
  Param center;
  Param half;
  int parent = -1;
  double size = 0.0;
  bool ok = true;
};

struct ResolutionTree {
  std::string disk;
  int r = 1;
  int order_n = 0;
  int k = 0;
  std::vector<ResolutionNode> nodes;
  std::vector<std::size_t> words;  // words[m] = number of words of length m
  std::size_t leaf_count = 0;      // words[order_n]; an upper bound of the minimal count
  bool complete = true;
  std::vector<std::size_t> failures;  // nodes where the size bound was not reached
  std::string failure;

  std::vector<std::size_t> leaves() const;
  std::vector<int> depth_histogram() const;  // dyadic levels of the leaves
};

ResolutionTree build_resolution(const SmoothMap& f, const SingularDisk& phi, int r, int n,
                                const ResolutionOptions& options = {});

struct ResolutionRate {
  std::vector<int> horizons;
  std::vector<std::string> disks;
  std::vector<std::vector<std::size_t>> leaves;  // per disk, per horizon
  std::vector<double> per_disk_rate;
  double h_R = 0.0;  // max per-disk fitted rate
  double H_R = 0.0;  // fitted rate of per-horizon maxima
  bool partial = false;
};

ResolutionRate resolution_entropy(const SmoothMap& f, const DiskFamily& family, int r, const std::vector<int>& horizons,
                                  const ResolutionOptions& options = {});

struct CoverCheck {
  bool holds = true;
  std::size_t points = 0;
  std::size_t violations = 0;
  double worst = 0.0;  // largest nearest-sample dynamic distance seen
  double eps = 0.0;
};

// Every point of a fine parameter cloud lies within d_n < eps of the leaf
// image samples (eps-dense in each leaf's parameter cube).
CoverCheck check_cover_property(const SmoothMap& f, const SingularDisk& phi, const ResolutionTree& tree, double eps,
                                int cloud_per_axis = 0);

struct ResolutionLaws {
  std::string disk;
  int k = 0, r = 1, n = 0, m = 0;
  // (a) leaf(n+m) <= leaf(n) leaf(m) slack
  std::size_t leaf_n = 0, leaf_m = 0, leaf_nm = 0;
  double submultiplicative_slack = 0.0;
  bool submultiplicative = true;
  // (b)
  CoverCheck cover;
  // (c) C' eps^k r(eps,n) <= leaf(n) <= C Lip^{(k/r + alpha) n} r(eps,n)
  double eps = 0.0;
  double alpha = 0.1;
  std::vector<int> horizons;
  std::vector<std::size_t> leaf_counts;
  std::vector<std::size_t> covering_counts;
  double log_c_lower = 0.0;
  double log_c_upper = 0.0;
  double leaf_rate = 0.0;
  double covering_rate = 0.0;
  double rate_allowance = 0.0;  // (k/r + alpha) log Lip
  bool sandwich = true;
  bool complete = true;
};

ResolutionLaws check_resolution_laws(const SmoothMap& f, const SingularDisk& phi, int r, int n, int m, double eps = 0.1,
                                     double alpha = 0.1, const ResolutionOptions& options = {});

nlohmann::json to_json(const ResolutionTree& t);
nlohmann::json to_json(const ResolutionRate& r);
nlohmann::json to_json(const ResolutionLaws& l);

}  // namespace dimentropy
