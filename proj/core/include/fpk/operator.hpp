#ifndef FPK_OPERATOR_HPP
#define FPK_OPERATOR_HPP

#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "fpk/fields.hpp"
#include "fpk/grid.hpp"

namespace fpk {

/// Bernoulli function B(s) = s/(e^s - 1), B(0) = 1. Series branch below
/// |s| = 1e-4, direct form otherwise.
double bernoulli(double s);

/// One interior face of the finite-volume mesh. `delta` is h * (E . nu) at
/// the face midpoint, with nu the unit normal pointing from cell i to cell j.
struct Face {
  int i{0};
  int j{0};
  int axis{0};
  double delta{0.0};
};

/// Discrete generator L_h in Scharfetter-Gummel (Chang-Cooper) flux form on a
/// no-flux box. Off-diagonals are >= 0, column sums vanish, and the stencil
/// touches face-adjacent cells only.
class OperatorMatrix {
public:
  OperatorMatrix(GridPtr grid, Eigen::SparseMatrix<double> mat, std::vector<Face> faces,
                 std::string scheme, std::string field_desc);

  const Grid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  const Eigen::SparseMatrix<double>& matrix() const { return mat_; }
  const std::vector<Face>& faces() const { return faces_; }
  const std::string& scheme() const { return scheme_; }
  const std::string& field_desc() const { return field_desc_; }
  int size() const { return static_cast<int>(mat_.rows()); }

  GridFunction apply(const GridFunction& f) const;

private:
  GridPtr grid_;
  Eigen::SparseMatrix<double> mat_;
  std::vector<Face> faces_;
  std::string scheme_;
  std::string field_desc_;
};

OperatorMatrix assemble_operator(GridPtr grid, const ForceField& E);

/// Discrete adjoint in the unweighted inner product: the transpose.
OperatorMatrix assemble_adjoint(const OperatorMatrix& op);

}  // namespace fpk

#endif
