#pragma once

// Per-field analysis with precision escalation, and a parallel scan over
// pairs of primes with results in deterministic order.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "unitlat/biquad.hpp"
#include "unitlat/bounds.hpp"
#include "unitlat/errors.hpp"
#include "unitlat/lattice.hpp"
#include "unitlat/real.hpp"

namespace unitlat {

struct AnalysisOptions {
  Bits bits = kDefaultBits;
  Bits max_bits = kMaxBits;
  UnitSource source;
};

/// Everything computed for one field.
struct FieldAnalysis {
  BiquadField field;
  Classification classification;
  std::optional<Prediction> prediction;
  LogLattice lattice;
  OrthogonalityDecision orthogonality;
  std::optional<BoundsReport> bounds;
  /// Precision at which the lattice decisions were made.
  Bits precision_used;

  bool consistent() const { return orthogonality.orthogonal == is_type_one(classification.type.tag); }
  std::optional<bool> prediction_matches() const {
    if (!prediction) return std::nullopt;
    return prediction->matches(classification.type);
  }
};

/// Classifies the field, builds its lattice and decides orthogonality,
/// doubling the precision when a tie or a numerically vanishing inner
/// product cannot be resolved. Bounds are attached when a Type I hypothesis
/// holds for a pair of primes.
inline FieldAnalysis analyze_field(std::int64_t d1, std::int64_t d2, const AnalysisOptions& opts) {
  BiquadField K = BiquadField::make(d1, d2, opts.source);
  Classification c = classify(K, opts.bits, opts.max_bits);
  std::optional<Prediction> pred;
  if (is_prime(d1) && is_prime(d2)) pred = predicted_type_any_order(d1, d2, K.norms());
  std::string last_error;
  for (Bits bits = opts.bits; bits <= opts.max_bits; bits = bits.doubled()) {
    try {
      auto R = field_regulators(K, bits);
      LogLattice lat = build_lattice(c.type, R);
      OrthogonalityDecision dec = is_orthogonal(lat);
      std::optional<BoundsReport> bounds;
      if (auto h = detect_hypothesis(K); h && is_type_one(c.type.tag)) {
        bounds = box_and_rho(K, c.type, R, h->which);
      }
      return FieldAnalysis{std::move(K), std::move(c), std::move(pred), std::move(lat), std::move(dec),
                           std::move(bounds), bits};
    } catch (const TieBreakFailure& e) {
      last_error = e.what();
    } catch (const NumericAmbiguity& e) {
      last_error = e.what();
    }
  }
  throw PrecisionExhausted("undecided at " + std::to_string(opts.max_bits.value) + " bits: " + last_error);
}

struct ScanRow {
  std::int64_t p1 = 0;
  std::int64_t p2 = 0;
  std::optional<FieldAnalysis> analysis;
  /// Set when the computation failed.
  std::string error;
  double elapsed_ms = 0;

  /// Theorem violations found in this row.
  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    if (!analysis) return out;
    if (!analysis->consistent()) {
      out.push_back(std::string("orthogonal=") + (analysis->orthogonality.orthogonal ? "true" : "false") +
                    " but type " + to_string(analysis->classification.type.tag));
    }
    if (auto m = analysis->prediction_matches(); m && !*m) out.push_back("predicted type differs from classification");
    if (analysis->bounds && !analysis->bounds->passed()) out.push_back("box or covering radius outside its interval");
    return out;
  }
};

struct ScanSummary {
  long pairs = 0;
  long errors = 0;
  std::map<std::string, long> type_counts;
  long orthogonal = 0;
  long predicted = 0;
  long prediction_mismatches = 0;
  long bounds_checked = 0;
  long bounds_failures = 0;
  long consistency_violations = 0;

  long violations() const { return prediction_mismatches + bounds_failures + consistency_violations; }
};

inline std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p <= n; ++p) {
    if (is_prime(p)) out.push_back(p);
  }
  return out;
}

/// All pairs p1 < p2 <= pmax analyzed on `parallelism` workers; rows come
/// back sorted by (p1, p2) regardless of completion order.
inline std::vector<ScanRow> run_scan(std::int64_t pmax, unsigned parallelism, const AnalysisOptions& opts) {
  const auto ps = primes_up_to(pmax);
  std::vector<ScanRow> rows;
  for (size_t i = 0; i < ps.size(); ++i) {
    for (size_t j = i + 1; j < ps.size(); ++j) rows.push_back(ScanRow{ps[i], ps[j], std::nullopt, {}, 0});
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next++; k < rows.size(); k = next++) {
      auto& row = rows[k];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        row.analysis = analyze_field(row.p1, row.p2, opts);
      } catch (const Error& e) {
        row.error = e.what();
      }
      row.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  parallelism = std::max(1u, parallelism);
  if (parallelism == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < parallelism; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

inline ScanSummary summarize(const std::vector<ScanRow>& rows) {
  ScanSummary s;
  for (const auto& r : rows) {
    ++s.pairs;
    if (!r.analysis) {
      ++s.errors;
      continue;
    }
    const auto& a = *r.analysis;
    ++s.type_counts[to_string(a.classification.type.tag)];
    if (a.orthogonality.orthogonal) ++s.orthogonal;
    if (!a.consistent()) ++s.consistency_violations;
    if (auto m = a.prediction_matches()) {
      ++s.predicted;
      if (!*m) ++s.prediction_mismatches;
    }
    if (a.bounds) {
      ++s.bounds_checked;
      if (!a.bounds->passed()) ++s.bounds_failures;
    }
  }
  return s;
}

}  // namespace unitlat
