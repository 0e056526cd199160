#include "generator.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace hotent::detail {

BlockOperator split_blocks(const Matrix& m, int n_blocks, int block_size) {
  BlockOperator out;
  for (int r = 0; r < n_blocks; ++r)
    for (int c = 0; c < n_blocks; ++c) {
      auto blk = m.block(r * block_size, c * block_size, block_size, block_size);
      if (blk.cwiseAbs().maxCoeff() == 0.0) continue;
      Block b;
      b.row = r;
      b.col = c;
      b.m = blk;
      b.m_adj = b.m.adjoint();
      out.push_back(std::move(b));
    }
  return out;
}

BlockGenerator::BlockGenerator(int n_blocks, int block_size, const std::vector<std::pair<double, Matrix>>& jumps,
                               const std::optional<Matrix>& hamiltonian)
    : nb_(n_blocks), bs_(block_size) {
  const int d = n_blocks * block_size;
  Matrix g = Matrix::Zero(d, d);
  if (hamiltonian) g -= complex(0.0, 1.0) * *hamiltonian;
  for (const auto& [rate, l] : jumps) {
    if (rate == 0.0) continue;
    g -= 0.5 * rate * (l.adjoint() * l);
    jumps_.emplace_back(rate, split_blocks(l, nb_, bs_));
  }
  drift_ = split_blocks(g, nb_, bs_);
}

void BlockGenerator::apply(const Matrix& rho, Matrix& out) const {
  const int d = nb_ * bs_;
  out.setZero(d, d);

  std::vector<char> live(static_cast<std::size_t>(nb_ * nb_), 0);
  for (int r = 0; r < nb_; ++r)
    for (int c = 0; c < nb_; ++c) live[r * nb_ + c] = rho.block(r * bs_, c * bs_, bs_, bs_).cwiseAbs().maxCoeff() != 0.0;
  auto blk = [&](const Matrix& m, int r, int c) { return m.block(r * bs_, c * bs_, bs_, bs_); };

  for (const Block& g : drift_) {
    for (int e = 0; e < nb_; ++e) {
      if (live[g.col * nb_ + e]) out.block(g.row * bs_, e * bs_, bs_, bs_).noalias() += g.m * blk(rho, g.col, e);
      if (live[e * nb_ + g.col]) out.block(e * bs_, g.row * bs_, bs_, bs_).noalias() += blk(rho, e, g.col) * g.m_adj;
    }
  }

  Matrix tmp(bs_, bs_);
  for (const auto& [rate, op] : jumps_) {
    for (const Block& k2 : op) {
      for (const Block& k1 : op) {
        if (!live[k1.col * nb_ + k2.col]) continue;
        tmp.noalias() = blk(rho, k1.col, k2.col) * k2.m_adj;
        out.block(k1.row * bs_, k2.row * bs_, bs_, bs_).noalias() += rate * (k1.m * tmp);
      }
    }
  }
}

ModeProduct::ModeProduct(const Matrix& m, int n1, int n2) : n1_(n1), n2_(n2), full_(m) {
  // Rearrange so that m = A (x) B becomes the rank-one matrix vec(A) vec(B)^T.
  Matrix r(n1 * n1, n2 * n2);
  for (int i1 = 0; i1 < n1; ++i1)
    for (int j1 = 0; j1 < n1; ++j1)
      for (int i2 = 0; i2 < n2; ++i2)
        for (int j2 = 0; j2 < n2; ++j2) r(i1 * n1 + j1, i2 * n2 + j2) = m(i1 * n2 + i2, j1 * n2 + j2);
  Eigen::JacobiSVD<Matrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return;
  const double root = std::sqrt(sv(0));
  Matrix a(n1, n1), b(n2, n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) a(i, j) = root * svd.matrixU()(i * n1 + j, 0);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j) b(i, j) = root * std::conj(svd.matrixV()(i * n2 + j, 0));
  Matrix k(n1 * n2, n1 * n2);
  for (int i1 = 0; i1 < n1; ++i1)
    for (int j1 = 0; j1 < n1; ++j1) k.block(i1 * n2, j1 * n2, n2, n2) = a(i1, j1) * b;
  if ((k - m).cwiseAbs().maxCoeff() > 1e-13 * m.cwiseAbs().maxCoeff()) return;
  kron_ = true;
  a_ = {a, a.adjoint(), a.transpose(), a.conjugate()};
  b_ = {b, b.adjoint(), b.transpose(), b.conjugate()};
}

void ModeProduct::kron_left(const Matrix& a, const Matrix& b, const RowMatrix& m, RowMatrix& dst) const {
  // Rows of m are indexed (i1, i2); contract i1 with a, then i2 with b.
  const Eigen::Index cols = m.cols();
  RowMatrix y(m.rows(), cols);
  Eigen::Map<const RowMatrix> mm(m.data(), n1_, n2_ * cols);
  Eigen::Map<RowMatrix> ym(y.data(), n1_, n2_ * cols);
  ym.noalias() = a * mm;
  dst.resize(m.rows(), cols);
  for (int i1 = 0; i1 < n1_; ++i1) dst.middleRows(i1 * n2_, n2_).noalias() = b * y.middleRows(i1 * n2_, n2_);
}

void ModeProduct::left(const RowMatrix& m, RowMatrix& dst, bool adjoint) const {
  if (!kron_) {
    if (adjoint)
      dst.noalias() = full_.adjoint() * m;
    else
      dst.noalias() = full_ * m;
    return;
  }
  kron_left(a_[adjoint ? 1 : 0], b_[adjoint ? 1 : 0], m, dst);
}

void ModeProduct::right(const RowMatrix& m, RowMatrix& dst, bool adjoint) const {
  if (!kron_) {
    if (adjoint)
      dst.noalias() = m * full_.adjoint();
    else
      dst.noalias() = m * full_;
    return;
  }
  // m op = (op^T m^T)^T
  const RowMatrix mt = m.transpose();
  RowMatrix t;
  kron_left(a_[adjoint ? 3 : 2], b_[adjoint ? 3 : 2], mt, t);
  dst = t.transpose();
}

namespace {

bool single_block(const BlockOperator& op, int row, int col) {
  return op.size() == 1 && op.front().row == row && op.front().col == col;
}

bool unitary(const Matrix& m, double tol) {
  return (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

} // namespace

std::vector<CarrierSplit::Factor> CarrierSplit::factorize(const Matrix& local, int block_size, const Matrix& x) {
  std::vector<Factor> out;
  for (const Block& blk : split_blocks(local, 2, block_size)) {
    Factor f;
    f.row = blk.row;
    f.col = blk.col;
    if (blk.row == 1 && blk.col == 0)
      f.dense = x.adjoint() * blk.m;
    else if (blk.row == 0 && blk.col == 1)
      f.dense = x * blk.m;
    else
      f.dense = blk.m;
    // Entries below this are the roundoff of stripping X.
    const double cut = 1e-14 * f.dense.cwiseAbs().maxCoeff();
    std::vector<Eigen::Triplet<complex>> nz;
    for (int c = 0; c < block_size; ++c)
      for (int r = 0; r < block_size; ++r)
        if (std::abs(f.dense(r, c)) > cut) nz.emplace_back(r, c, f.dense(r, c));
    if (nz.size() * 4 <= static_cast<std::size_t>(block_size) * block_size) {
      f.sparse = true;
      f.sp.resize(block_size, block_size);
      f.sp.setFromTriplets(nz.begin(), nz.end());
      f.dense.resize(0, 0);
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::optional<CarrierSplit> CarrierSplit::detect(int n_blocks, std::array<int, 2> fock_dims,
                                                 const std::vector<std::pair<double, Matrix>>& jumps,
                                                 const std::optional<Matrix>& hamiltonian,
                                                 const std::optional<Matrix>& local_frame) {
  if (n_blocks != 2) return std::nullopt;
  constexpr double tol = 1e-10;
  const int b = fock_dims[0] * fock_dims[1];
  const int d = 2 * b;

  std::optional<Matrix> u;
  if (local_frame && local_frame->topRightCorner(b, b).cwiseAbs().maxCoeff() == 0.0 &&
      local_frame->bottomLeftCorner(b, b).cwiseAbs().maxCoeff() == 0.0)
    u = *local_frame;
  auto to_local = [&](const Matrix& m) -> Matrix { return u ? Matrix(u->adjoint() * m * *u) : m; };

  CarrierSplit out;
  out.bs_ = b;
  std::vector<std::pair<double, Matrix>> rest;
  for (const auto& [rate, l] : jumps) {
    if (rate == 0.0) continue;
    Matrix loc = to_local(l);
    const BlockOperator op = split_blocks(loc, n_blocks, b);
    const bool down = single_block(op, 1, 0);
    const bool up = single_block(op, 0, 1);
    if ((down || up) && unitary(op.front().m, tol)) {
      const Matrix x = down ? op.front().m : op.front().m_adj;
      if (out.x_.size() == 0) out.x_ = x;
      if ((x - out.x_).cwiseAbs().maxCoeff() <= tol) {
        (down ? out.down_ : out.up_) += rate;
        continue;
      }
    }
    rest.emplace_back(rate, std::move(loc));
  }
  if (out.down_ + out.up_ == 0.0) return std::nullopt;

  Matrix g = Matrix::Zero(d, d);
  if (hamiltonian) g -= complex(0.0, 1.0) * to_local(*hamiltonian);
  for (const auto& [rate, l] : rest) {
    g -= 0.5 * rate * (l.adjoint() * l);
    const std::vector<Factor> f = factorize(l, b, out.x_);
    out.products_.push_back({rate, f, f});
  }
  const std::vector<Factor> fg = factorize(g, b, out.x_);
  if (!fg.empty()) {
    out.products_.push_back({1.0, fg, {}});
    out.products_.push_back({1.0, {}, fg});
  }

  out.xop_ = ModeProduct(out.x_, fock_dims[0], fock_dims[1]);
  for (int r = 0; r < 2; ++r) {
    const Matrix ur = u ? Matrix(u->block(r * b, r * b, b, b)) : Matrix::Identity(b, b);
    out.w_[r] = r == 0 ? Matrix(ur.adjoint()) : Matrix(out.x_.adjoint() * ur.adjoint());
  }
  return out;
}

void CarrierSplit::to_frame(const Matrix& rho, Matrix& out) const {
  const int b = bs_;
  out.resize(2 * b, 2 * b);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const Matrix t = w_[r] * rho.block(r * b, c * b, b, b);
      out.block(r * b, c * b, b, b).noalias() = t * w_[c].adjoint();
    }
}

void CarrierSplit::from_frame(const Matrix& rho, Matrix& out) const {
  const int b = bs_;
  out.resize(2 * b, 2 * b);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const Matrix t = w_[r].adjoint() * rho.block(r * b, c * b, b, b);
      out.block(r * b, c * b, b, b).noalias() = t * w_[c];
    }
}

namespace {

// dst += coef * s * m, one contiguous row update per nonzero.
void csr_product_add(const SparseMatrix& s, const RowMatrix& m, RowMatrix& dst, complex coef) {
  const auto* outer = s.outerIndexPtr();
  const auto* inner = s.innerIndexPtr();
  const complex* val = s.valuePtr();
  for (Eigen::Index i = 0; i < s.outerSize(); ++i)
    for (auto k = outer[i]; k < outer[i + 1]; ++k) dst.row(i) += (coef * val[k]) * m.row(inner[k]);
}

} // namespace

void CarrierSplit::Factor::left_add(const RowMatrix& m, RowMatrix& dst, double coef) const {
  if (sparse)
    csr_product_add(sp, m, dst, coef);
  else
    dst.noalias() += coef * (dense * m);
}

void CarrierSplit::apply_rest(const Matrix& rho, Matrix& out) const {
  const int b = bs_;
  out.setZero(2 * b, 2 * b);

  RowMatrix tmp(b, b), adj(b, b), res(b, b);

  // sigma_cc' is block cc' in the local frame.
  std::array<RowMatrix, 4> sigma;
  std::array<bool, 4> live{};
  for (int c = 0; c < 2; ++c)
    for (int e = 0; e < 2; ++e) {
      const auto blk = rho.block(c * b, e * b, b, b);
      if (blk.cwiseAbs().maxCoeff() == 0.0) continue;
      live[c * 2 + e] = true;
      RowMatrix t = blk;
      if (c == 1) {
        xop_.left(t, tmp);
        t.swap(tmp);
      }
      if (e == 1) {
        xop_.right(t, tmp, true);
        t.swap(tmp);
      }
      sigma[c * 2 + e] = std::move(t);
    }

  // acc[(r r') (c c')] collects S_a sigma_cc' S_b^dag landing in block r r'.
  // Right factors are applied as (S_b (.)^dag)^dag, which keeps every sparse
  // product a left product.
  std::array<RowMatrix, 16> acc;
  auto slot = [&](int r, int rp, int c, int cp) -> RowMatrix& {
    RowMatrix& m = acc[(r * 2 + rp) * 4 + c * 2 + cp];
    if (m.size() == 0) m.setZero(b, b);
    return m;
  };
  auto right_add = [&](RowMatrix& dst, double coef, const RowMatrix& m, const Factor& f) {
    adj = m.adjoint();
    res.setZero();
    f.left_add(adj, res, coef);
    dst += res.adjoint();
  };

  for (const Product& p : products_) {
    if (p.a.empty()) {
      for (const Factor& fb : p.b)
        for (int c = 0; c < 2; ++c)
          if (live[c * 2 + fb.col]) right_add(slot(c, fb.row, c, fb.col), p.coef, sigma[c * 2 + fb.col], fb);
    } else if (p.b.empty()) {
      for (const Factor& fa : p.a)
        for (int e = 0; e < 2; ++e)
          if (live[fa.col * 2 + e]) fa.left_add(sigma[fa.col * 2 + e], slot(fa.row, e, fa.col, e), p.coef);
    } else {
      for (const Factor& fa : p.a)
        for (const Factor& fb : p.b) {
          if (!live[fa.col * 2 + fb.col]) continue;
          tmp.setZero();
          fa.left_add(sigma[fa.col * 2 + fb.col], tmp, 1.0);
          right_add(slot(fa.row, fb.row, fa.col, fb.col), p.coef, tmp, fb);
        }
    }
  }

  for (int k = 0; k < 16; ++k) {
    if (acc[k].size() == 0) continue;
    const int r = k / 8, rp = (k / 4) % 2, c = (k / 2) % 2, cp = k % 2;
    if (c == 1) {
      xop_.left(acc[k], tmp, true);
      acc[k].swap(tmp);
    }
    if (cp == 1) {
      xop_.right(acc[k], tmp);
      acc[k].swap(tmp);
    }
    out.block(r * b, rp * b, b, b) += acc[k];
  }
}

void CarrierSplit::flow(double t, const Matrix& in, Matrix& out) const {
  const int b = bs_;
  const double s = down_ + up_;
  // Population transfer p -> q at rate down, q -> p at rate up.
  const double gain = -std::expm1(-s * t) / s;
  const double keep = std::exp(-s * t);
  out.resize(2 * b, 2 * b);
  const auto p = in.topLeftCorner(b, b);
  const auto q = in.bottomRightCorner(b, b);
  out.topLeftCorner(b, b) = (keep + up_ * gain) * p + (up_ * gain) * q;
  out.bottomRightCorner(b, b) = (down_ * gain) * p + (keep + down_ * gain) * q;
  const double coh = std::exp(-0.5 * s * t);
  out.topRightCorner(b, b) = coh * in.topRightCorner(b, b);
  out.bottomLeftCorner(b, b) = coh * in.bottomLeftCorner(b, b);
}

} // namespace hotent::detail
