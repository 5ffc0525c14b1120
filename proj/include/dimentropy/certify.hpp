#pragma once

// Lambda^k norm bounds, entropy-expansion and entropy-hyperbolicity
// certificates, periodic-point bound checks.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimentropy/lyapunov.hpp"
#include "dimentropy/systems.hpp"

namespace dimentropy {

struct LambdaKNorm {
  int k = 0;
  double value = 1.0;   // inflated fine-grid sup; the bound that gets used
  double raw = 1.0;     // fine-grid sup without inflation
  double coarse = 1.0;  // sup on the coarser grid
  double trend = 0.0;   // |raw - coarse| / raw
  int grid = 0;         // fine grid samples per axis
  double inflation = 1.0;
  Point argmax;
  bool stable = true;  // trend within the certificate limit

  double log_value() const;
};

struct NormOptions {
  int grid = 0;  // coarse grid per axis; the fine grid is 2 * grid - 1; 0 picks from d
  double inflation = 1.05;
  double trend_limit = 0.02;
};

// Grid sup over x of max_{1<=l<=k} prod_{i<=l} sigma_i(Df(x)). Affine maps
// have a constant derivative, so their value is exact and not inflated.
LambdaKNorm lambda_k_norm(const SmoothMap& f, int k, const NormOptions& options = {});

enum class CertificateKind { EntropyExpanding, EntropyHyperbolic };
enum class Verdict { Proved, Inconclusive, RefutedAtResolution };
std::string to_string(CertificateKind k);
std::string to_string(Verdict v);

struct Witness {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  std::string note;
};

struct Certificate {
  CertificateKind kind = CertificateKind::EntropyExpanding;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<Witness> witnesses;
  EntropyValue h_top;
  double floor = 0.05;
  std::vector<LambdaKNorm> norms;
  std::string reason;
};

struct CertifyOptions {
  double floor = 0.05;
  NormOptions norm;
  // Lower estimate of H^{d-1} from a disk family, used only for refutation.
  std::optional<double> h_dminus1_lower;
};

// Proved iff log ||Lambda^{d-1} Tf|| < h - floor on a stable grid.
Certificate certify_entropy_expanding(const SmoothMap& f, const EntropyValue& h_top_lower,
                                      const CertifyOptions& options = {});

// Proved iff log ||Lambda^{d1-1} Tf|| and log ||Lambda^{d2-1} Tf^-1|| are
// both below h - floor. The variant with both norms on f is also reported.
Certificate certify_entropy_hyperbolic(const SmoothMap& f, const EntropyValue& h_top_lower, int d1, int d2,
                                       const CertifyOptions& options = {});

enum class BoundMode { Multiplicative, Logarithmic };

struct PeriodicBoundReport {
  BoundMode mode = BoundMode::Multiplicative;
  double h = 0.0;
  int period = 1;
  std::vector<int> horizons;
  std::vector<std::uint64_t> counts;
  std::vector<double> ratios;  // e^{-n h} count, or (1/n) log count
  double min_ratio = 0.0;
  double trend = 0.0;  // slope of log ratio per step (multiplicative mode)
  bool pass = false;
  bool skipped = false;
  bool zero_counts = false;
  std::string status;
};

PeriodicBoundReport periodic_bound_check(const SmoothMap& f, double h, const std::vector<int>& horizons, BoundMode mode,
                                         int period = 1, double tolerance = 0.01);

nlohmann::json to_json(const LambdaKNorm& n);
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const PeriodicBoundReport& r);

}  // namespace dimentropy
