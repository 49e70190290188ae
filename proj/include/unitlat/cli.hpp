#pragma once

// Command-line front end. run_cli is the whole program minus main(), so the
// tests can drive it with captured streams.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "unitlat/biquad.hpp"
#include "unitlat/bounds.hpp"
#include "unitlat/cubic.hpp"
#include "unitlat/errors.hpp"
#include "unitlat/kernel.hpp"
#include "unitlat/lattice.hpp"
#include "unitlat/quadratic.hpp"
#include "unitlat/report.hpp"
#include "unitlat/scan.hpp"
#include "unitlat/unit_cache.hpp"

namespace unitlat {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitComputation = 2, kExitTheorem = 3 };

namespace cli {

struct GlobalOptions {
  bool json = false;
  long precision = kDefaultBits.value;
  long max_precision = kMaxBits.value;
  int digits = 30;
  std::string cache;
  bool timing = false;
};

inline void emit(std::ostream& out, const GlobalOptions& g, Json doc) {
  if (g.json) {
    out << doc.dump(2) << '\n';
  } else {
    doc.erase("schema");
    write_text(out, doc);
  }
}

inline Json envelope(const std::string& command) { return {{"schema", kSchema}, {"command", command}}; }

inline void require_prime(std::int64_t p, const std::string& command) {
  if (!is_prime(p)) {
    throw PreconditionError(std::to_string(p) + " is not prime; `" + command +
                            "` takes two distinct primes (use `classify-d` for general squarefree d)");
  }
}

inline Bits checked_bits(long bits, const std::string& what) {
  if (bits < 64 || bits > (1L << 20)) throw PreconditionError(what + " must be in [64, 1048576] bits");
  return Bits(bits);
}

}  // namespace cli

/// Runs the command line; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Log-unit lattices of real biquadratic and cyclic cubic fields"};
  app.name("unitlat");
  app.fallthrough();
  app.require_subcommand(1);
  cli::GlobalOptions g;
  app.add_flag("--json", g.json, "Emit JSON (schema unitlat/1)");
  app.add_option("--precision", g.precision, "Working precision in bits")->capture_default_str();
  app.add_option("--max-precision", g.max_precision, "Cap of the precision ladder in bits")->capture_default_str();
  app.add_option("--digits", g.digits, "Significant digits of printed reals")
      ->check(CLI::Range(1, 10000))
      ->capture_default_str();
  app.add_option("--cache", g.cache, "Unit cache file (default: $UNITLAT_CACHE)");
  app.add_flag("--timing", g.timing, "Include elapsed times in scan output");

  std::int64_t d = 0, p1 = 0, p2 = 0;
  auto* unit = app.add_subcommand("unit", "Fundamental unit and regulator of Q(sqrt d)");
  unit->add_option("d", d, "Squarefree d >= 2")->required();

  auto* classify_cmd = app.add_subcommand("classify", "Unit type of Q(sqrt p1, sqrt p2) for primes");
  classify_cmd->add_option("p1", p1)->required();
  classify_cmd->add_option("p2", p2)->required();

  auto* classify_d = app.add_subcommand("classify-d", "Unit type of Q(sqrt d1, sqrt d2) for squarefree d");
  classify_d->add_option("d1", p1)->required();
  classify_d->add_option("d2", p2)->required();

  auto* lattice = app.add_subcommand("lattice", "Log-unit lattice report: basis, minima, orthogonality, bounds");
  lattice->add_option("d1", p1)->required();
  lattice->add_option("d2", p2)->required();

  std::int64_t pmax = 0;
  unsigned parallelism = std::max(1u, std::thread::hardware_concurrency());
  std::string out_path, format = "csv";
  auto* scan = app.add_subcommand("scan", "All prime pairs p1 < p2 <= pmax");
  scan->add_option("pmax", pmax)->required()->check(CLI::Range(2, 100000));
  scan->add_option("--parallelism,-j", parallelism, "Worker threads")->check(CLI::Range(1u, 1024u));
  scan->add_option("--out,-o", out_path, "Output file (default: stdout)");
  scan->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::optional<long> a;
  std::vector<std::string> poly, unit_coeffs;
  std::string tolerance = "1e-30";
  auto* cubic = app.add_subcommand("cubic", "Equilateral check for a cyclic cubic log-unit lattice");
  cubic->add_option("a", a, "Parameter of x^3 - a x^2 - (a+3) x - 1");
  auto* poly_opt = cubic->add_option("--poly", poly, "Coefficients b c d of x^3 + b x^2 + c x + d")->expected(3);
  cubic->add_option("--unit", unit_coeffs, "Unit u0 u1 u2 as u0 + u1 t + u2 t^2 (default t)")
      ->expected(3)
      ->needs(poly_opt);
  cubic->add_option("--tolerance", tolerance, "Verdict tolerance")->capture_default_str();

  long trials = 10000;
  std::uint64_t seed = 20240601;
  auto* selftest = app.add_subcommand("selftest", "Randomized lattice property suite");
  selftest->add_option("--trials", trials)->check(CLI::Range(1L, 10000000L))->capture_default_str();
  selftest->add_option("--seed", seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Bits bits = cli::checked_bits(g.precision, "--precision");
    const Bits max_bits = cli::checked_bits(g.max_precision, "--max-precision");
    if (max_bits < bits) throw PreconditionError("--max-precision is below --precision");
    const Formatter fmt(g.digits);
    UnitCache cache(UnitCache::resolve_path(g.cache));
    AnalysisOptions opts{bits, max_bits, cache.source()};

    if (unit->parsed()) {
      Json doc = cli::envelope("unit");
      doc["unit"] = unit_json(cache.unit(SquarefreeD::make(d)), fmt, bits);
      doc["precision"] = bits.value;
      cache.flush();
      cli::emit(out, g, doc);
      return kExitOk;
    }

    if (classify_cmd->parsed() || classify_d->parsed()) {
      const bool primes = classify_cmd->parsed();
      if (primes) {
        cli::require_prime(p1, "classify");
        cli::require_prime(p2, "classify");
      }
      BiquadField K = BiquadField::make(p1, p2, opts.source);
      Classification c = classify(K, bits, max_bits);
      Json doc = cli::envelope(primes ? "classify" : "classify-d");
      doc["field"] = field_json(K);
      doc["classification"] = type_json(c.type);
      doc["precision_used"] = c.bits_used.value;
      if (primes) doc["prediction"] = prediction_json(predicted_type_any_order(p1, p2, K.norms()), c.type);
      cache.flush();
      cli::emit(out, g, doc);
      return kExitOk;
    }

    if (lattice->parsed()) {
      FieldAnalysis fa = analyze_field(p1, p2, opts);
      Json doc = cli::envelope("lattice");
      doc.update(analysis_json(fa, fmt));
      cache.flush();
      cli::emit(out, g, doc);
      return fa.consistent() ? kExitOk : kExitTheorem;
    }

    if (scan->parsed()) {
      auto rows = run_scan(pmax, parallelism, opts);
      cache.flush();
      const ScanSummary s = summarize(rows);
      std::ofstream file;
      if (!out_path.empty()) {
        file.open(out_path, std::ios::trunc);
        if (!file) throw Error("cannot open " + out_path);
      }
      std::ostream& os = out_path.empty() ? out : file;
      if (format == "json") {
        Json doc = cli::envelope("scan");
        doc["pmax"] = pmax;
        doc["precision"] = bits.value;
        Json arr = Json::array();
        for (const auto& r : rows) arr.push_back(row_json(r, fmt, g.timing));
        doc["rows"] = arr;
        doc["summary"] = summary_json(s);
        os << doc.dump(2) << '\n';
      } else {
        os << kCsvHeader << '\n';
        for (const auto& r : rows) write_csv_row(os, r, fmt);
        os << "# summary " << summary_json(s).dump() << '\n';
      }
      if (!out_path.empty()) {
        err << "scan: " << s.pairs << " pairs, " << s.violations() << " theorem violations, " << s.errors
            << " errors\n";
      }
      if (s.violations() > 0) return kExitTheorem;
      if (s.errors > 0) return kExitComputation;
      return kExitOk;
    }

    if (cubic->parsed()) {
      std::optional<CyclicCubicField> F;
      if (!poly.empty()) {
        if (a) throw PreconditionError("give either a or --poly, not both");
        std::array<mpz_class, 3> u{0, 1, 0};
        for (size_t i = 0; i < unit_coeffs.size(); ++i) u[i] = mpz_class(unit_coeffs[i]);
        F = CyclicCubicField::explicit_poly(mpz_class(poly[0]), mpz_class(poly[1]), mpz_class(poly[2]), u);
      } else if (a) {
        F = CyclicCubicField::simplest(*a);
      } else {
        throw PreconditionError("cubic needs a parameter a or --poly b c d");
      }
      CubicLogLattice L = log_lattice(*F, bits);
      CubicLatticeReport r = check_equilateral(L.lattice, parse_real(tolerance, bits));
      Json doc = cli::envelope("cubic");
      doc["tolerance"] = tolerance;
      doc["precision"] = bits.value;
      doc.update(cubic_json(*F, L, r, fmt));
      cli::emit(out, g, doc);
      return r.verdict == Verdict::Equilateral ? kExitOk : kExitTheorem;
    }

    if (selftest->parsed()) {
      auto rep = kernel::check_kernel_propositions(trials, seed);
      Json doc = cli::envelope("selftest");
      doc.update(kernel_json(rep));
      cli::emit(out, g, doc);
      return rep.passed() ? kExitOk : kExitTheorem;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: invalid integer: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const HypothesisNotSatisfied& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitUsage;
}

}  // namespace unitlat
