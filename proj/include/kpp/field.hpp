#pragma once

#include <cstddef>
#include <vector>

#include "kpp/errors.hpp"

namespace kpp::solver {

/// Uniform nodes x_i = i h on [0, X_max], i = 0..n_cells.
class Grid {
 public:
  Grid(double x_max, int n_cells) : x_max_(x_max), n_cells_(n_cells) {
    if (!(x_max > 0.0)) throw ParameterError("grid: X_max must be positive");
    if (n_cells < 256) throw ParameterError("grid: need at least 256 cells");
  }

  double x_max() const { return x_max_; }
  int n_cells() const { return n_cells_; }
  std::size_t nodes() const { return static_cast<std::size_t>(n_cells_) + 1; }
  double h() const { return x_max_ / n_cells_; }
  double x(std::size_t i) const { return h() * static_cast<double>(i); }

 private:
  double x_max_;
  int n_cells_;
};

struct Field {
  Grid grid;
  std::vector<double> u;
  double t = 0.0;
};

}  // namespace kpp::solver
