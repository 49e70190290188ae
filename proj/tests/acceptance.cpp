// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "unitlat/bounds.hpp"
#include "unitlat/cubic.hpp"
#include "unitlat/kernel.hpp"
#include "unitlat/lattice.hpp"
#include "unitlat/scan.hpp"

using namespace unitlat;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// The prime-pair scan feeds criteria 1 to 3; it runs once.
struct ScanResult {
  ScanSummary summary;
  double seconds;
};

const ScanResult& scan_200() {
  static const ScanResult r = [] {
    const auto t0 = Clock::now();
    auto rows = run_scan(200, 1, AnalysisOptions{});
    return ScanResult{summarize(rows), seconds_since(t0)};
  }();
  return r;
}

Outcome orthogonality_iff_type_one() {
  const auto& r = scan_200();
  std::ostringstream os;
  os << r.summary.pairs << " pairs, " << r.summary.orthogonal << " orthogonal, "
     << r.summary.consistency_violations << " violations, " << r.summary.errors << " errors, " << r.seconds << " s";
  const bool ok = r.summary.pairs == 1035 && r.summary.consistency_violations == 0 && r.summary.errors == 0 &&
                  r.seconds < 300;
  return {ok, os.str()};
}

Outcome predictions_match() {
  const auto& s = scan_200().summary;
  std::ostringstream os;
  os << s.predicted << " predicted pairs, " << s.prediction_mismatches << " mismatches";
  return {s.predicted > 0 && s.prediction_mismatches == 0 && s.errors == 0, os.str()};
}

Outcome box_and_rho_intervals() {
  const auto& s = scan_200().summary;
  std::ostringstream os;
  os << s.bounds_checked << " fields under a hypothesis, " << s.bounds_failures << " interval failures at "
     << kDefaultBits.value << " bits";
  return {s.bounds_checked > 0 && s.bounds_failures == 0 && s.errors == 0, os.str()};
}

Outcome regulator_bounds() {
  long checked = 0, failures = 0, ties = 0;
  std::string first;
  for (long d = 2; d <= 500; ++d) {
    if (!oracle::is_squarefree(d)) continue;
    auto c = regulator_bounds_check(SquarefreeD::make(d), kDefaultBits);
    ++checked;
    ties += c.lower_tie ? 1 : 0;
    if (!c.ok()) {
      if (failures++ == 0) first = " (first d=" + std::to_string(d) + ")";
    }
  }
  std::ostringstream os;
  os << checked << " squarefree d, " << failures << " failures, " << ties << " exact lower-bound ties" << first;
  return {failures == 0, os.str()};
}

Outcome kernel_selftest() {
  const auto t0 = Clock::now();
  auto rep = kernel::check_kernel_propositions(10000, 20240601);
  const double secs = seconds_since(t0);
  long counterexamples = 0;
  for (const auto& r : rep.results) counterexamples += r.failures;
  std::ostringstream os;
  os << rep.trials << " trials, " << counterexamples << " counterexamples, " << secs << " s";
  return {rep.passed() && counterexamples == 0 && secs < 60, os.str()};
}

Outcome types_three_four() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> dist(0.05, 20.0);
  long trials = 0, minima_failures = 0, short_failures = 0, congruence_failures = 0;
  for (auto tag : {UnitType::III, UnitType::IV}) {
    const FieldType type = make_field_type(tag, {0, 1, 2});
    for (int t = 0; t < 1000; ++t) {
      std::array<double, 3> r{dist(rng), dist(rng), dist(rng)};
      std::sort(r.begin(), r.end());
      const std::array<Real, 3> R{Real(r[0], kDefaultBits), Real(r[1], kDefaultBits), Real(r[2], kDefaultBits)};
      const LogLattice lat = build_lattice(type, R);
      const MinimaReport m = successive_minima(lat);
      ++trials;
      if (!in_candidates_up_to_sign(tag, m.achieving[0]) || !in_candidates_up_to_sign(tag, m.achieving[1])) {
        ++minima_failures;
      }
      // Every lattice vector no longer than lambda_2 and independent of the
      // first minimum is a candidate.
      const Real cutoff = square(m.lambda[1]) * (Real(1L, kDefaultBits) + equality_tolerance(kDefaultBits));
      for (long a = -6; a <= 6; ++a) {
        for (long b = -6; b <= 6; ++b) {
          for (long c = -6; c <= 6; ++c) {
            const Triple u{a, b, c};
            const bool member = lat.contains(u);
            if (member != in_congruence_set(tag, u)) ++congruence_failures;
            const bool independent = detail::cross(u, m.achieving[0]) != Triple{0, 0, 0};
            if (member && independent && lat.norm2(u) <= cutoff && !in_candidates_up_to_sign(tag, u)) {
              ++short_failures;
            }
          }
        }
      }
    }
  }
  std::ostringstream os;
  os << trials << " lattices, " << minima_failures << " minima outside the candidate set, " << short_failures
     << " short vectors outside it, " << congruence_failures << " congruence mismatches";
  return {minima_failures == 0 && short_failures == 0 && congruence_failures == 0, os.str()};
}

Outcome cubic_equilateral() {
  const auto t0 = Clock::now();
  const Real tol(1e-30, kDefaultBits);
  long failures = 0;
  std::vector<std::array<Real, 3>> grams;
  std::string first;
  for (long a : {-1L, 0L, 1L, 2L, 3L, 5L, 10L, 20L}) {
    auto L = log_lattice(CyclicCubicField::simplest(a), kDefaultBits);
    auto r = check_equilateral(L.lattice, tol);
    const bool ok = r.verdict == Verdict::Equilateral && abs(r.angle - Real::pi(kDefaultBits) / 3L) < tol &&
                    abs(r.ratio - Real(1L, kDefaultBits)) < tol;
    if (!ok && failures++ == 0) first = " (first a=" + std::to_string(a) + ")";
    grams.push_back(r.normalized_gram);
  }
  long gram_failures = 0;
  const Real gtol(1e-20, kDefaultBits);
  for (size_t i = 0; i < grams.size(); ++i) {
    for (size_t j = i + 1; j < grams.size(); ++j) {
      for (size_t k = 0; k < 3; ++k) {
        if (!(abs(grams[i][k] - grams[j][k]) < gtol)) ++gram_failures;
      }
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << grams.size() << " fields, " << failures << " verdict failures, " << gram_failures
     << " Gram mismatches, " << secs << " s" << first;
  return {failures == 0 && gram_failures == 0 && secs < 10, os.str()};
}

Outcome continued_fraction_units() {
  long checked = 0, failures = 0;
  std::string first;
  for (long d = 2; d <= 100; ++d) {
    if (!oracle::is_squarefree(d)) continue;
    const QuadUnit u = fundamental_unit(d);
    const oracle::PellUnit b = oracle::brute_force_unit(d);
    ++checked;
    if (u.x != b.x || u.y != b.y || u.q != b.q || u.norm != b.norm) {
      if (failures++ == 0) first = " (first d=" + std::to_string(d) + ")";
    }
  }
  std::ostringstream os;
  os << checked << " squarefree d, " << failures << " mismatches" << first;
  return {failures == 0, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"orthogonal iff type I, prime pairs up to 200", orthogonality_iff_type_one},
      {"predicted unit types match classification", predictions_match},
      {"box and covering-radius intervals", box_and_rho_intervals},
      {"regulator bounds for squarefree d up to 500", regulator_bounds},
      {"lattice kernel property suite", kernel_selftest},
      {"types III and IV short vectors and congruences", types_three_four},
      {"simplest cubic lattices are equilateral", cubic_equilateral},
      {"continued-fraction units equal brute-force units", continued_fraction_units},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
