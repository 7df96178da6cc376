// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "spinorbench/checks.hpp"
#include "spinorbench/report.hpp"
#include "test_util.hpp"

using namespace spinorbench;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Worst-case accumulator that remembers the first failure.
struct Tracker {
  bool pass = true;
  std::ostringstream note;
  std::string first;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) first = what;
    pass = pass && ok;
  }
  Outcome done() {
    if (!pass) note << (note.tellp() > 0 ? "; " : "") << "first failure: " << first;
    return {pass, note.str()};
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ---- 1 ----------------------------------------------------------------------------

Outcome clifford_suite() {
  const auto t0 = Clock::now();
  Tracker t;
  double worst = 0.0;
  int count = 0;
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; p + q <= 8; ++q) {
      if (p + q == 0) continue;
      const auto S = build_spinor_space(Signature(p, q));
      ++count;
      for (int i = 0; i < S->n(); ++i)
        for (int j = 0; j < S->n(); ++j) {
          CMat ac = S->gamma[i] * S->gamma[j] + S->gamma[j] * S->gamma[i];
          if (i == j) ac += 2.0 * S->sig.eps(i) * S->identity();
          worst = std::max(worst, ac.cwiseAbs().maxCoeff());
        }
      worst = std::max(worst, (S->beta - S->beta.adjoint()).cwiseAbs().maxCoeff());
      for (int i = 0; i < S->n(); ++i)
        worst = std::max(worst, (S->gamma[i].adjoint() * S->beta - S->adjoint_sign * S->beta * S->gamma[i]).cwiseAbs().maxCoeff());
      if (S->even()) {
        const CMat Pp = S->projector(Chirality::plus), Pm = S->projector(Chirality::minus);
        worst = std::max({worst, (Pp * Pp - Pp).cwiseAbs().maxCoeff(), (Pp * Pm).cwiseAbs().maxCoeff(),
                          (Pp + Pm - S->identity()).cwiseAbs().maxCoeff()});
      }
    }
  const double secs = seconds_since(t0);
  t.require(worst <= 1e-12, "identity defect above 1e-12");
  t.require(secs < 10.0, "runtime over 10 s");
  t.note << count << " signatures, worst defect " << worst << ", " << secs << " s";
  return t.done();
}

// ---- 2 ----------------------------------------------------------------------------

Outcome causality_suite() {
  Tracker t;
  std::mt19937_64 rng(2);
  int failures = 0;
  double worst = -1e300;
  for (int n = 3; n <= 7; ++n) {
    const auto S = build_spinor_space(Signature::lorentzian(n));
    for (int k = 0; k < 1000; ++k) {
      const Spinor phi(S, sbt::random_cvec(rng, S->dim_spinor));
      const RVec V = dirac_current(phi);
      const double ratio = frame_inner(S->sig, V, V) / std::pow(phi.coeffs.squaredNorm(), 2);
      worst = std::max(worst, ratio);
      if (ratio > 1e-10) ++failures;
    }
  }
  t.require(failures == 0, std::to_string(failures) + " acausal currents");
  t.note << "5000 spinors over (1,2)..(1,6), max g(V,V)/|phi|^4 = " << worst;
  return t.done();
}

// ---- 3 ----------------------------------------------------------------------------

using Multiset = std::vector<std::pair<BlockKind, std::vector<double>>>;

Multiset multiset(const std::vector<Block>& blocks) {
  Multiset m;
  for (const auto& b : blocks) m.emplace_back(b.kind, b.params);
  std::sort(m.begin(), m.end());
  return m;
}

bool same_multiset(const Multiset& a, const Multiset& b, double tol) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].first != b[i].first || a[i].second.size() != b[i].second.size()) return false;
    for (size_t j = 0; j < a[i].second.size(); ++j)
      if (std::abs(a[i].second[j] - b[i].second[j]) > tol) return false;
  }
  return true;
}

std::vector<Block> sample_line(BlockKind k) {
  switch (k) {
    case BlockKind::EuclidB:
    case BlockKind::B_II:
    case BlockKind::B_IIaPlus:
    case BlockKind::B_IIaMinus:
    case BlockKind::Kahler24: return {Block{k, {1.3}}};
    case BlockKind::L11:
    case BlockKind::Split22:
    case BlockKind::Mixed22: return {Block{k, {0.8}}};
    case BlockKind::B_IIb: return {Block{k, {0.6, 1.1}}};
    default: return {Block{k, {}}};
  }
}

Outcome round_trip() {
  const auto t0 = Clock::now();
  Tracker t;
  int ops = 0;
  double worst_res = 0.0;
  for (auto k : all_block_kinds()) {
    const auto line = sample_line(k);
    int q_min = 0;
    for (const auto& b : line) q_min += b.size() - b.index();
    for (int q = std::max(q_min, 1); q <= 6; ++q) {
      const SkewOperator base = embed_blocks(line, q);
      const Multiset want = multiset(classify(base).blocks);
      bool line_found = false;
      for (const auto& b : want) line_found = line_found || b.first == k;
      t.require(line_found, to_string(k) + " lost in its own embedding");
      for (int trial = 0; trial < 100; ++trial) {
        const RMat G = random_gram_orthogonal(base.gram, 1000 * q + trial);
        const SkewOperator op{base.gram, G * base.b * G.inverse()};
        BlockDecomposition dec;
        try {
          dec = classify(op);
        } catch (const std::exception& e) {
          t.require(false, to_string(k) + ": " + e.what());
          continue;
        }
        ++ops;
        const double res = std::max(dec.residual_b / std::max(1.0, op.b.norm()), dec.residual_gram);
        worst_res = std::max(worst_res, res);
        t.require(same_multiset(multiset(dec.blocks), want, 1e-6), to_string(k) + " q=" + std::to_string(q));
        t.require(res <= 1e-8, "reconstruction residual for " + to_string(k));
      }
    }
  }
  const double secs = seconds_since(t0);
  t.require(secs < 60.0, "runtime over 60 s");
  t.note << ops << " conjugated operators, worst reconstruction " << worst_res << ", " << secs << " s";
  return t.done();
}

// ---- 4, 5 -------------------------------------------------------------------------

SkewOperator kahler(int m, double nu) {
  PForm w(Signature(2, 2 * m - 2), 2);
  for (int i = 0; i < m; ++i) w.set({2 * i, 2 * i + 1}, nu);
  return operator_from_form(w);
}

SkewOperator wedge(const Signature& sig, const RVec& a, const RVec& b) {
  PForm one(sig, 1);
  for (int i = 0; i < sig.dim(); ++i) one.set({i}, flat(sig, b)(i));
  return operator_from_form(wedge_covector(flat(sig, a), one));
}

Outcome worked_examples() {
  Tracker t;
  for (int m = 2; m <= 4; ++m) {
    std::vector<Block> want{Block{BlockKind::B_II, {1.5}}};
    for (int i = 1; i < m; ++i) want.push_back(Block{BlockKind::EuclidB, {1.5}});
    t.require(same_multiset(multiset(classify(kahler(m, 1.5)).blocks), multiset(want), 1e-10),
              "Kahler m=" + std::to_string(m));
  }
  for (int n = 4; n <= 8; ++n) {
    const Signature sig(2, n - 2);
    RVec l1 = RVec::Zero(n), l2 = RVec::Zero(n), t1 = RVec::Zero(n);
    l1(0) = l1(2) = 1;
    l2(1) = l2(3) = 1;
    t1(1) = 1;
    std::vector<Block> a{Block{BlockKind::B_Ia, {}}}, b{Block{BlockKind::B_Ib, {}}};
    for (int i = 0; i < n - 4; ++i) a.push_back(Block{BlockKind::Zero, {}});
    for (int i = 0; i < n - 3; ++i) b.push_back(Block{BlockKind::Zero, {}});
    t.require(same_multiset(multiset(classify(wedge(sig, l1, l2)).blocks), multiset(a), 0),
              "lightlike plane n=" + std::to_string(n));
    t.require(same_multiset(multiset(classify(wedge(sig, l1, t1)).blocks), multiset(b), 0),
              "lightlike x timelike n=" + std::to_string(n));
  }
  t.note << "Kahler m=2..4, totally lightlike and lightlike-timelike planes n=4..8";
  return t.done();
}

Outcome stabilizers() {
  Tracker t;
  for (int n = 3; n <= 8; ++n)
    t.require(stabilizer_dimension(SkewOperator{Signature(2, n - 2).gram(), RMat::Zero(n, n)}) == n * (n - 1) / 2,
              "zero operator n=" + std::to_string(n));
  for (int m = 2; m <= 5; ++m)
    t.require(stabilizer_dimension(kahler(m, 0.7)) == m * m, "Kahler m=" + std::to_string(m));
  PForm w(Signature(2, 4), 2);
  w.set({0, 1}, 1.0);
  w.set({2, 3}, 1.0);
  const int split = stabilizer_dimension(operator_from_form(w));
  t.require(split == 5, "split example gave " + std::to_string(split));
  t.note << "zero n=3..8, Kahler m=2..5, split II_b = " << split;
  return t.done();
}

// ---- 6 ----------------------------------------------------------------------------

Outcome pseudo_hyperbolic_suite() {
  const auto t0 = Clock::now();
  Tracker t;
  std::set<CurrentBehaviour> seen;
  double kmax = 0, smax = 0, dmax = 0, lmax = 0;
  for (int n = 3; n <= 5; ++n)
    for (const auto& type : hyperbolic_factory_types(n)) {
      const auto ks = hyperbolic_factory(n, type, cplx(0, 0.5));
      const auto pts = sample_points(*ks.chart, 20, 1);
      const double kr = killing_residual(*ks.chart, *ks.space, ks.field, ks.lambda, pts).max;
      double sr = 0;
      for (const auto& x : pts) sr = std::max(sr, std::abs(curvature(*ks.chart, x).scal + n * (n - 1.0)));
      const Check de = dirac_eigen_check(*ks.chart, *ks.space, ks.field, ks.lambda, pts, 1e-6);
      const Check len = length_constancy_check(*ks.space, ks.field, pts, 1e-8);
      const auto V = dirac_current_field(*ks.space, ks.field);
      seen.insert(current_behaviour(*ks.chart, V, pts, Tolerances()["causal"]));
      kmax = std::max(kmax, kr);
      smax = std::max(smax, sr);
      dmax = std::max(dmax, de.residual);
      lmax = std::max(lmax, len.residual);
      const std::string tag = "H-" + std::to_string(n) + " " + type;
      t.require(kr <= 1e-6, tag + " killing");
      t.require(sr <= 1e-5, tag + " scal");
      t.require(de.pass, tag + " Dirac eigenvalue");
      t.require(len.pass, tag + " length");
    }
  for (auto b : {CurrentBehaviour::lightlike, CurrentBehaviour::changes_type, CurrentBehaviour::timelike_constant,
                 CurrentBehaviour::timelike_nonconstant})
    t.require(seen.count(b) == 1, "behaviour not realized: " + to_string(b));
  const double secs = seconds_since(t0);
  t.require(secs < 120.0, "runtime over 2 min");
  t.note << "killing " << kmax << ", scal " << smax << ", Dirac " << dmax << ", length " << lmax << ", "
         << seen.size() << " behaviours, " << secs << " s";
  return t.done();
}

// ---- 7 ----------------------------------------------------------------------------

Outcome cone_suite() {
  Tracker t;
  double pmax = 0, lmax = 0;
  for (int n : {3, 4})
    for (const auto& type : hyperbolic_factory_types(n)) {
      RunConfig cfg;
      cfg.command = "lift-cone";
      cfg.chart = "H-" + std::to_string(n);
      cfg.spinor = type;
      cfg.samples = 10;
      const Report r = lift_cone_report(cfg);
      const double p = r.body["parallel_residual"].get<double>(), l = r.body["lemma32_residual"].get<double>();
      pmax = std::max(pmax, p);
      lmax = std::max(lmax, l);
      const std::string tag = cfg.chart + " " + type;
      t.require(p <= 1e-6, tag + " parallel");
      t.require(l <= 1e-12, tag + " contraction identity");
      t.require(r.body["type"] == r.body["ancestor_type"], tag + " lifted type");
    }
  t.note << "parallel " << pmax << ", contraction identity " << lmax;
  return t.done();
}

// ---- 8 ----------------------------------------------------------------------------

Outcome sasaki_suite() {
  Tracker t;
  const Tolerances tol;
  double good = 0, bad = 1e300;
  for (int n : {3, 5}) {
    const auto ks = hyperbolic_factory(n, "II_a", cplx(0, 0.5));
    const auto pts = sample_points(*ks.chart, 10, 1);
    const auto V = dirac_current_field(*ks.space, ks.field);
    const double s = std::sqrt(-frame_inner(ks.chart->signature(), V(pts[0]), V(pts[0])));
    const VectorFieldFn U = [V, s](const RVec& x) -> RVec { return V(x) / s; };
    const SasakiReport sr = sasaki_check(*ks.chart, U, pts, tol);
    for (const auto& c : sr.identities) {
      good = std::max(good, c.residual);
      t.require(c.residual <= 1e-5, "H-" + std::to_string(n) + " " + c.name);
    }
    // Perturbations: a non-Killing bump, and a rescaled field.
    const VectorFieldFn bumped = [U](const RVec& x) -> RVec {
      RVec v = U(x);
      v(1) += 0.05 * std::sin(x(0));
      return v;
    };
    const VectorFieldFn stretched = [U](const RVec& x) -> RVec { return 1.1 * U(x); };
    for (const auto& P : {bumped, stretched}) {
      double worst = 0;
      for (const auto& c : sasaki_check(*ks.chart, P, pts, tol).identities) worst = std::max(worst, c.residual);
      bad = std::min(bad, worst);
      t.require(worst >= 1e-3, "perturbation not detected on H-" + std::to_string(n));
    }
  }
  t.note << "identities " << good << ", weakest perturbed signal " << bad;
  return t.done();
}

// ---- 9 ----------------------------------------------------------------------------

Outcome warped_suite() {
  Tracker t;
  double smax = 0, kmax = 0, omax = 0;
  for (const char* kind : {"exp", "sinh", "cosh"})
    for (int n = 3; n <= 5; ++n) {
      const std::string id = std::string("warped-") + kind + "-" + std::to_string(n);
      const auto ks = catalog_spinor(id, "transport");
      const auto pts = sample_points(*ks.chart, 10, 1);
      double sr = 0, er = 0;
      std::vector<double> ts;
      for (const auto& x : pts) {
        const auto cp = curvature(*ks.chart, x);
        sr = std::max(sr, std::abs(cp.scal + n * (n - 1.0)));
        er = std::max(er, cp.einstein_residual);
        ts.push_back(x(0));
      }
      const double kr = killing_residual(*ks.chart, *ks.space, ks.field, ks.lambda, pts).max;
      const auto w = *warped_data(id);
      const double scal_k = curvature(*w.fibre, 0.5 * (w.fibre->box().lo + w.fibre->box().hi)).scal;
      const double ode = warped_ode_residual(w.kind, scal_k, n - 1, ts);
      smax = std::max({smax, sr, er});
      kmax = std::max(kmax, kr);
      omax = std::max(omax, ode);
      t.require(sr <= 1e-5 && er <= 1e-5, id + " Einstein");
      t.require(kr <= 1e-5, id + " Killing");
      t.require(ode <= 1e-10, id + " ODE");
    }
  t.note << "Einstein " << smax << ", Killing " << kmax << ", ODE " << omax;
  return t.done();
}

// ---- 10 ---------------------------------------------------------------------------

Outcome constant_suite() {
  Tracker t;
  const Tolerances tol;
  std::set<double> constants;
  double fit_max = 0, par_max = 0;
  for (int n = 3; n <= 5; ++n)
    for (const auto& type : hyperbolic_factory_types(n)) {
      const auto ks = hyperbolic_factory(n, type, cplx(0, 0.5));
      const auto pts = sample_points(*ks.chart, 6, 1);
      const auto cr = dirac_current_report(*ks.chart, *ks.space, ks.field, pts, pts, tol);
      const auto V = flat_field(ks.chart->signature(), dirac_current_field(*ks.space, ks.field));
      const double par =
          parallel_residual(*cone_chart(ks.chart), lift_form(ks.chart, V, cr.special_killing_c), cone_points(pts, {0.75, 1.5}));
      constants.insert(std::round(cr.special_killing_c * 1e6) / 1e6);
      fit_max = std::max(fit_max, cr.special_killing_fit.residual);
      par_max = std::max(par_max, par);
      const std::string tag = "H-" + std::to_string(n) + " " + type;
      t.require(cr.special_killing_fit.residual <= 1e-6, tag + " fit");
      t.require(par <= 1e-6, tag + " lifted form");
    }
  t.require(constants.size() == 1, "fitted constant differs between spinors");
  t.note << "c = " << *constants.begin() << ", fit " << fit_max << ", lifted 2-form " << par_max;
  return t.done();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Clifford suite", clifford_suite},
      {"causality suite", causality_suite},
      {"classifier round trip", round_trip},
      {"worked examples", worked_examples},
      {"stabilizer dimensions", stabilizers},
      {"pseudo-hyperbolic verification", pseudo_hyperbolic_suite},
      {"cone suite", cone_suite},
      {"Sasaki suite", sasaki_suite},
      {"warped-product suite", warped_suite},
      {"special Killing constant", constant_suite},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
