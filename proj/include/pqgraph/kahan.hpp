#ifndef PQGRAPH_KAHAN_HPP
#define PQGRAPH_KAHAN_HPP

namespace pqgraph {

/// Compensated (Kahan) accumulator. All graph integrals and norms go
/// through this so that tolerances around 1e-12 survive graphs with
/// thousands of vertices.
class KahanAccumulator {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace pqgraph

#endif
