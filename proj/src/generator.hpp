#pragma once

#include "hotent/qoperator.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace hotent::detail {

using SparseMatrix = Eigen::SparseMatrix<complex, Eigen::RowMajor>;
using RowMatrix = Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Nonzero resonator-sized block (row, col) of an operator whose rows and
/// columns are grouped by ancilla level.
struct Block {
  int row = 0;
  int col = 0;
  Matrix m;
  Matrix m_adj;
};

using BlockOperator = std::vector<Block>;

BlockOperator split_blocks(const Matrix& m, int n_blocks, int block_size);

/// rho -> G rho + rho G^dag + sum_k r_k L_k rho L_k^dag with
/// G = -iH - 1/2 sum_k r_k L_k^dag L_k, evaluated block by block. Blocks of
/// rho that are exactly zero are skipped, which keeps ancilla coherences
/// free when they start out empty.
class BlockGenerator {
public:
  BlockGenerator(int n_blocks, int block_size, const std::vector<std::pair<double, Matrix>>& jumps,
                 const std::optional<Matrix>& hamiltonian);

  void apply(const Matrix& rho, Matrix& out) const;

private:
  int nb_;
  int bs_;
  BlockOperator drift_;
  std::vector<std::pair<double, BlockOperator>> jumps_;
};

/// Operator on the two-resonator block, applied as A (x) B when it factorizes
/// over the modes and as a dense matrix otherwise.
class ModeProduct {
public:
  ModeProduct() = default;
  ModeProduct(const Matrix& m, int n1, int n2);

  bool factorized() const { return kron_; }
  /// dst = op m, or op^dag m
  void left(const RowMatrix& m, RowMatrix& dst, bool adjoint = false) const;
  /// dst = m op, or m op^dag
  void right(const RowMatrix& m, RowMatrix& dst, bool adjoint = false) const;

private:
  void kron_left(const Matrix& a, const Matrix& b, const RowMatrix& m, RowMatrix& dst) const;

  int n1_ = 0;
  int n2_ = 0;
  bool kron_ = false;
  Matrix full_;
  // A, A^dag, A^T, conj(A) and the same for B
  std::array<Matrix, 4> a_;
  std::array<Matrix, 4> b_;
};

/// Closed-form treatment of the bare carrier of a two-level ancilla.
///
/// A jump whose only block maps level 0 to level 1 through a unitary X, or
/// level 1 to level 0 through X^dag, just exchanges rho_00 with
/// X^dag rho_11 X. In the frame where block 1 is rotated by X^dag that
/// exchange is a two-state rate process acting entry by entry.
///
/// The remaining jumps are compiled in the same frame. With an optional
/// block-diagonal unitary u (state frame rho, local frame u^dag rho u) every
/// block of a jump is written as G S with G one of 1, X, X^dag and S taken
/// in the local frame, where polaron images are sparse. Only the rotations by
/// X are then dense products.
class CarrierSplit {
public:
  /// Splits the carrier jumps off; nullopt when there are none.
  static std::optional<CarrierSplit> detect(int n_blocks, std::array<int, 2> fock_dims,
                                            const std::vector<std::pair<double, Matrix>>& jumps,
                                            const std::optional<Matrix>& hamiltonian,
                                            const std::optional<Matrix>& local_frame);

  double down_rate() const { return down_; }
  double up_rate() const { return up_; }

  void to_frame(const Matrix& rho, Matrix& out) const;
  void from_frame(const Matrix& rho, Matrix& out) const;
  /// out = exp(t L_carrier) in, both in the rotated frame; out must not alias in.
  void flow(double t, const Matrix& in, Matrix& out) const;
  /// Everything except the carrier, in the rotated frame.
  void apply_rest(const Matrix& rho, Matrix& out) const;

private:
  // Block (row, col) of a local-frame operator with the X factor stripped.
  struct Factor {
    int row = 0;
    int col = 0;
    bool sparse = false;
    Matrix dense;
    SparseMatrix sp;

    /// dst += coef * S m
    void left_add(const RowMatrix& m, RowMatrix& dst, double coef) const;
  };
  // coef * A sigma B^dag; an empty B stands for the identity.
  struct Product {
    double coef = 1.0;
    std::vector<Factor> a;
    std::vector<Factor> b;
  };

  static std::vector<Factor> factorize(const Matrix& local, int block_size, const Matrix& x);

  int bs_ = 0;
  double down_ = 0.0;
  double up_ = 0.0;
  Matrix x_;
  ModeProduct xop_;
  std::array<Matrix, 2> w_; // rho^_rc = w_r rho_rc w_c^dag
  std::vector<Product> products_;
};

} // namespace hotent::detail
