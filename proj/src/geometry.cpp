#include "hotent/geometry.hpp"

#include "hotent/errors.hpp"

#include <sstream>

namespace hotent {

namespace {

constexpr int kMinFockLevels = 3;

void require_fock(int n, const char* what) {
  if (n < kMinFockLevels) {
    throw InvalidDimension(std::string(what) + " truncation must be >= 3, got " + std::to_string(n));
  }
}

} // namespace

std::string to_string(AncillaKind kind) {
  switch (kind) {
  case AncillaKind::None:
    return "none";
  case AncillaKind::TLS:
    return "tls";
  case AncillaKind::Oscillator:
    return "oscillator";
  }
  return "?";
}

std::string to_string(Site site) {
  switch (site) {
  case Site::Ancilla:
    return "A";
  case Site::R1:
    return "R1";
  case Site::R2:
    return "R2";
  }
  return "?";
}

SiteSet::SiteSet(std::initializer_list<Site> sites) {
  for (Site s : sites) insert(s);
}

HilbertGeometry::HilbertGeometry(AncillaKind kind, std::array<int, 3> dims) : kind_(kind), dims_(dims) {
  for (int d : dims_) {
    if (d < 1) throw InvalidDimension("factor dimension must be positive");
  }
}

HilbertGeometry HilbertGeometry::with_tls(int n1, int n2) {
  require_fock(n1, "R1");
  require_fock(n2, "R2");
  return HilbertGeometry(AncillaKind::TLS, {2, n1, n2});
}

HilbertGeometry HilbertGeometry::with_oscillator(int ancilla_levels, int n1, int n2) {
  if (ancilla_levels < 2) throw InvalidDimension("oscillator ancilla needs at least 2 levels");
  require_fock(n1, "R1");
  require_fock(n2, "R2");
  return HilbertGeometry(AncillaKind::Oscillator, {ancilla_levels, n1, n2});
}

HilbertGeometry HilbertGeometry::two_mode(int n1, int n2) {
  require_fock(n1, "R1");
  require_fock(n2, "R2");
  return HilbertGeometry(AncillaKind::None, {1, n1, n2});
}

HilbertGeometry HilbertGeometry::single_mode(int n) {
  require_fock(n, "R1");
  return HilbertGeometry(AncillaKind::None, {1, n, 1});
}

HilbertGeometry HilbertGeometry::reduced(const SiteSet& keep) const {
  auto dims = dims_;
  AncillaKind kind = kind_;
  if (!keep.contains(Site::Ancilla)) {
    dims[0] = 1;
    kind = AncillaKind::None;
  }
  if (!keep.contains(Site::R1)) dims[1] = 1;
  if (!keep.contains(Site::R2)) dims[2] = 1;
  return HilbertGeometry(kind, dims);
}

std::string HilbertGeometry::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << "[" << dims_[0] << "x" << dims_[1] << "x" << dims_[2] << "]";
  return os.str();
}

} // namespace hotent
