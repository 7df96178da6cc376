#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "spinorbench/clifford.hpp"
#include "spinorbench/jet.hpp"

namespace spinorbench {

struct Box {
  RVec lo;
  RVec hi;
};

// A coordinate chart with closed-form metric and orthonormal frame.
// Frame vectors are columns in coordinate components, ordered timelike first,
// so that g(e_a, e_b) = sig.eps(a) delta_ab.
class Chart {
 public:
  Chart(std::string id, Signature sig, Box box) : id_(std::move(id)), sig_(sig), box_(std::move(box)) {}
  virtual ~Chart() = default;

  const std::string& id() const { return id_; }
  const Signature& signature() const { return sig_; }
  int dim() const { return sig_.dim(); }
  const Box& box() const { return box_; }

  // Row-major n x n outputs.
  virtual void metric(const double* x, double* g) const = 0;
  virtual void metric(const Jet1* x, Jet1* g) const = 0;
  virtual void metric(const Jet2* x, Jet2* g) const = 0;
  virtual void frame(const double* x, double* e) const = 0;
  virtual void frame(const Jet1* x, Jet1* e) const = 0;

  RMat metric_at(const RVec& x) const;
  RMat frame_at(const RVec& x) const;
  bool contains(const RVec& x) const;

 private:
  std::string id_;
  Signature sig_;
  Box box_;
};

using ChartPtr = std::shared_ptr<const Chart>;

// Derived supplies template<class T> metric_t(const T*, T*) and frame_t(const T*, T*).
template <class Derived>
class ChartImpl : public Chart {
 public:
  using Chart::Chart;
  void metric(const double* x, double* g) const override { self().metric_t(x, g); }
  void metric(const Jet1* x, Jet1* g) const override { self().metric_t(x, g); }
  void metric(const Jet2* x, Jet2* g) const override { self().metric_t(x, g); }
  void frame(const double* x, double* e) const override { self().frame_t(x, e); }
  void frame(const Jet1* x, Jet1* e) const override { self().frame_t(x, e); }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

// Metric with exact first and second coordinate derivatives.
struct MetricJet {
  RMat g;
  std::vector<RMat> dg;                // dg[k] = d_k g
  std::vector<std::vector<RMat>> ddg;  // ddg[k][l] = d_k d_l g
};

MetricJet metric_jet(const Chart& chart, const RVec& x, bool second = true);

// d_k of the frame matrix (columns e_a).
std::vector<RMat> frame_derivatives(const Chart& chart, const RVec& x);

// Shifted Halton points inside the box, keeping a relative margin from its faces.
std::vector<RVec> sample_points(const Chart& chart, int count, std::uint64_t seed, double margin = 0.1);

}  // namespace spinorbench
