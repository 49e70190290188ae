#pragma once

// JSON and CSV renderings of computed objects. Reals are decimal strings
// with a fixed number of significant digits; big integers are decimal
// strings. Keys are sorted, so equal inputs give byte-identical output.

#include <nlohmann/json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "unitlat/biquad.hpp"
#include "unitlat/bounds.hpp"
#include "unitlat/cubic.hpp"
#include "unitlat/kernel.hpp"
#include "unitlat/lattice.hpp"
#include "unitlat/quadratic.hpp"
#include "unitlat/scan.hpp"

namespace unitlat {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "unitlat/1";

class Formatter {
 public:
  explicit Formatter(int digits = 30) : digits_(digits) {}

  std::string real(const Real& x) const { return x.to_string(digits_); }
  Json reals(const std::vector<Real>& xs) const {
    Json a = Json::array();
    for (const auto& x : xs) a.push_back(real(x));
    return a;
  }
  template <size_t N>
  Json reals(const std::array<Real, N>& xs) const {
    return reals(std::vector<Real>(xs.begin(), xs.end()));
  }
  int digits() const { return digits_; }

 private:
  int digits_;
};

inline Json triple_json(const Triple& t) { return Json::array({t[0], t[1], t[2]}); }

inline std::string mask_name(int m) {
  std::string s;
  for (int i = 0; i < 3; ++i) {
    if (m & (1 << i)) s += (s.empty() ? "e" : "*e") + std::to_string(i + 1);
  }
  return s.empty() ? "1" : s;
}

inline Json unit_json(const QuadUnit& u, const Formatter& fmt, Bits bits) {
  return {{"d", u.d.value()},
          {"x", u.x.get_str()},
          {"y", u.y.get_str()},
          {"q", u.q},
          {"norm", u.norm},
          {"discriminant", discriminant(u.d)},
          {"regulator", fmt.real(regulator(u, bits))}};
}

inline Json field_json(const BiquadField& K) {
  return {{"d1", K.d1().value()},
          {"d2", K.d2().value()},
          {"d3", K.d3().value()},
          {"m", K.m()},
          {"norms", Json::array({K.norms()[0], K.norms()[1], K.norms()[2]})},
          {"discriminant", K.discriminant().get_str()}};
}

inline Json type_json(const FieldType& t) {
  Json squares = Json::array();
  const auto v = t.square_classes();
  for (int m = 1; m < 8; ++m) {
    if (v[static_cast<size_t>(m)]) squares.push_back(mask_name(m));
  }
  return {{"type", to_string(t.tag)},
          {"family", t.family()},
          {"system", t.describe_system()},
          {"perm", Json::array({t.perm[0] + 1, t.perm[1] + 1, t.perm[2] + 1})},
          {"square_classes", squares},
          {"index", t.index()}};
}

inline Json prediction_json(const std::optional<Prediction>& p, const FieldType& t) {
  if (!p) return nullptr;
  return {{"rule", p->rule},
          {"type", p->tag ? Json(to_string(*p->tag)) : Json(nullptr)},
          {"family", p->family},
          {"swapped", p->swapped},
          {"matches", p->matches(t)}};
}

inline Json interval_json(const IntervalCheck& c, const Formatter& fmt) {
  return {{"value", fmt.real(c.value)},
          {"lower", fmt.real(c.lower)},
          {"upper", fmt.real(c.upper)},
          {"lower_tie", c.lower_tie},
          {"ok", c.ok()}};
}

inline Json bounds_json(const BoundsReport& b, const BiquadField& K, const Formatter& fmt) {
  Json roles = Json::array();
  for (size_t k = 0; k < 3; ++k) {
    Json r = interval_json(b.box[k], fmt);
    r["d"] = K.d(b.role_subfield[k]).value();
    r["Delta"] = b.Delta[k].get_str();
    r["Delta_tilde"] = fmt.real(b.Delta_tilde[k]);
    r["Delta_hat"] = fmt.real(b.Delta_hat[k]);
    r["length"] = (b.factor[k] == 2 ? "2R" : "R");
    roles.push_back(r);
  }
  return {{"hypothesis", b.hypothesis},
          {"swapped", b.swapped},
          {"box", roles},
          {"box_sorted", fmt.reals(b.box_sorted)},
          {"rho", interval_json(b.rho, fmt)},
          {"passed", b.passed()}};
}

inline Json lattice_json(const LogLattice& lat, const OrthogonalityDecision& dec, const Formatter& fmt) {
  Json basis = Json::array();
  for (const auto& b : lat.basis) basis.push_back(triple_json(b));
  Json achieving = Json::array();
  for (const auto& a : dec.minima.achieving) achieving.push_back(triple_json(a));
  Json frame = Json::array();
  for (int s : lat.frame_subfield) frame.push_back(s + 1);
  Json j = {{"frame_subfields", frame},
            {"R", fmt.reals(lat.R)},
            {"basis", basis},
            {"det", lat.det()},
            {"lambda", fmt.reals(dec.minima.lambda)},
            {"achieving", achieving},
            {"orthogonal", dec.orthogonal}};
  if (dec.basis) {
    Json ob = Json::array();
    for (const auto& b : *dec.basis) ob.push_back(triple_json(b));
    j["orthogonal_basis"] = ob;
  }
  if (dec.witness_pair) {
    j["witness"] = {{"pair", Json::array({triple_json(dec.witness_pair->first), triple_json(dec.witness_pair->second)})},
                    {"inner_product", fmt.real(*dec.witness_inner)},
                    {"reason", dec.witness}};
  }
  return j;
}

inline Json analysis_json(const FieldAnalysis& a, const Formatter& fmt) {
  Json j = {{"field", field_json(a.field)},
            {"classification", type_json(a.classification.type)},
            {"prediction", prediction_json(a.prediction, a.classification.type)},
            {"lattice", lattice_json(a.lattice, a.orthogonality, fmt)},
            {"consistent", a.consistent()},
            {"precision_used", a.precision_used.value}};
  j["bounds"] = a.bounds ? bounds_json(*a.bounds, a.field, fmt) : Json(nullptr);
  return j;
}

inline Json row_json(const ScanRow& r, const Formatter& fmt, bool timing) {
  Json j = {{"p1", r.p1}, {"p2", r.p2}};
  if (r.analysis) {
    const auto& a = *r.analysis;
    const auto e = a.field.norms();
    j["e"] = Json::array({e[0], e[1], e[2]});
    j["predicted"] = a.prediction ? Json(a.prediction->tag ? to_string(*a.prediction->tag) : a.prediction->family)
                                  : Json(nullptr);
    j["classified"] = to_string(a.classification.type.tag);
    j["orthogonal"] = a.orthogonality.orthogonal;
    j["lambda"] = fmt.reals(a.orthogonality.minima.lambda);
    j["precision_used"] = a.precision_used.value;
    if (a.bounds) {
      j["box"] = fmt.reals(std::array<Real, 3>{a.bounds->box[0].value, a.bounds->box[1].value,
                                               a.bounds->box[2].value});
      j["rho"] = fmt.real(a.bounds->rho.value);
      j["bounds_ok"] = a.bounds->passed();
    }
  } else {
    j["error"] = r.error;
  }
  auto f = r.failures();
  if (!f.empty()) j["FAILURE"] = f;
  if (timing) j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

inline Json summary_json(const ScanSummary& s) {
  return {{"pairs", s.pairs},
          {"errors", s.errors},
          {"type_counts", s.type_counts},
          {"orthogonal", s.orthogonal},
          {"predicted", s.predicted},
          {"prediction_mismatches", s.prediction_mismatches},
          {"bounds_checked", s.bounds_checked},
          {"bounds_failures", s.bounds_failures},
          {"consistency_violations", s.consistency_violations},
          {"violations", s.violations()}};
}

inline constexpr const char* kCsvHeader = "p1,p2,e1,e2,e3,predicted,classified,orthogonal,lambda1,lambda2,lambda3";

/// One CSV record; failures and errors follow as '#' comment lines.
inline void write_csv_row(std::ostream& os, const ScanRow& r, const Formatter& fmt) {
  os << r.p1 << ',' << r.p2;
  if (r.analysis) {
    const auto& a = *r.analysis;
    const auto e = a.field.norms();
    std::string pred = "none";
    if (a.prediction) pred = a.prediction->tag ? to_string(*a.prediction->tag) : a.prediction->family;
    os << ',' << e[0] << ',' << e[1] << ',' << e[2] << ',' << pred << ',' << to_string(a.classification.type.tag)
       << ',' << (a.orthogonality.orthogonal ? "true" : "false");
    for (const auto& l : a.orthogonality.minima.lambda) os << ',' << fmt.real(l);
    os << '\n';
  } else {
    os << ",,,,,,,,,\n# ERROR " << r.p1 << ',' << r.p2 << ": " << r.error << '\n';
  }
  for (const auto& f : r.failures()) os << "# FAILURE " << r.p1 << ',' << r.p2 << ": " << f << '\n';
}

inline Json cubic_json(const CyclicCubicField& F, const CubicLogLattice& L, const CubicLatticeReport& r,
                       const Formatter& fmt) {
  Json logs = Json::array();
  for (const auto& v : L.logs) logs.push_back(fmt.reals(v));
  Json g = Json::array();
  for (const auto& c : L.sigma.g) g.push_back(c.get_str());
  Json unit = Json::array();
  for (const auto& c : F.unit()) unit.push_back(c.get_str());
  return {{"polynomial", F.describe()},
          {"discriminant", F.discriminant().get_str()},
          {"roots", fmt.reals(L.roots.roots)},
          {"root_error_bound", fmt.real(L.roots.error_bound)},
          {"unit", unit},
          {"unit_norm", F.unit_norm().get_str()},
          {"sigma", {{"perm", Json::array({L.sigma.perm[0] + 1, L.sigma.perm[1] + 1, L.sigma.perm[2] + 1})},
                     {"polynomial", g}}},
          {"log_vectors", logs},
          {"zero_sum_residual", fmt.reals(L.zero_sum_residual)},
          {"galois_residual", fmt.real(L.galois_residual)},
          {"verdict", to_string(r.verdict)},
          {"v1", fmt.reals(r.v1)},
          {"v1_coeffs", Json::array({r.v1_coeffs[0].get_str(), r.v1_coeffs[1].get_str()})},
          {"rotated_v1", fmt.reals(r.rotated)},
          {"v2", fmt.reals(r.v2)},
          {"v2_coeffs", Json::array({r.v2_coeffs[0].get_str(), r.v2_coeffs[1].get_str()})},
          {"ratio", fmt.real(r.ratio)},
          {"angle", fmt.real(r.angle)},
          {"membership_residual", fmt.real(r.membership_residual)},
          {"hexagonal_closure", fmt.real(r.hexagonal_closure)},
          {"generation_residual", fmt.real(r.generation_residual)},
          {"coeff_det", r.coeff_det.get_str()},
          {"normalized_gram", fmt.reals(r.normalized_gram)},
          {"failures", r.failures}};
}

inline Json kernel_json(const kernel::KernelReport& rep) {
  Json results = Json::array();
  for (const auto& p : rep.results) {
    results.push_back({{"name", p.name},
                       {"checked", p.checked},
                       {"failures", p.failures},
                       {"counterexample", p.counterexample},
                       {"passed", p.passed()}});
  }
  return {{"trials", rep.trials}, {"seed", rep.seed}, {"results", results}, {"passed", rep.passed()}};
}

/// Indented "key: value" rendering of a JSON document for terminals.
inline void write_text(std::ostream& os, const Json& j, int indent = 0) {
  const std::string pad(static_cast<size_t>(indent), ' ');
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  auto flat = [&](const Json& v) {
    if (!v.is_array()) return false;
    for (const auto& x : v) {
      if (x.is_structured() && !(x.is_array() && std::none_of(x.begin(), x.end(), [](const Json& y) {
                                   return y.is_structured();
                                 }))) {
        return false;
      }
    }
    return true;
  };
  auto inline_array = [&](const Json& v) {
    std::string s = "[";
    bool first = true;
    for (const auto& x : v) {
      s += first ? "" : ", ";
      first = false;
      if (x.is_array()) {
        s += "(";
        bool f2 = true;
        for (const auto& y : x) {
          s += (f2 ? "" : ", ") + scalar(y);
          f2 = false;
        }
        s += ")";
      } else {
        s += scalar(x);
      }
    }
    return s + "]";
  };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_object()) {
        os << pad << k << ":\n";
        write_text(os, v, indent + 2);
      } else if (v.is_array() && !flat(v)) {
        os << pad << k << ":\n";
        for (const auto& x : v) {
          os << pad << "  -\n";
          write_text(os, x, indent + 4);
        }
      } else if (v.is_array()) {
        os << pad << k << ": " << inline_array(v) << '\n';
      } else {
        os << pad << k << ": " << scalar(v) << '\n';
      }
    }
  } else {
    os << pad << scalar(j) << '\n';
  }
}

}  // namespace unitlat
