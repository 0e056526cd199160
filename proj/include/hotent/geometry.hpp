#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <string>

namespace hotent {

enum class AncillaKind { None, TLS, Oscillator };

/// Factor positions in the fixed (ancilla, R1, R2) layout.
enum class Site : int { Ancilla = 0, R1 = 1, R2 = 2 };

std::string to_string(AncillaKind kind);
std::string to_string(Site site);

/// Bitmask over sites, used to select factors for partial traces.
class SiteSet {
public:
  SiteSet() = default;
  SiteSet(std::initializer_list<Site> sites);

  bool contains(Site s) const { return (bits_ >> static_cast<int>(s)) & 1u; }
  bool empty() const { return bits_ == 0; }
  void insert(Site s) { bits_ |= 1u << static_cast<int>(s); }

private:
  unsigned bits_ = 0;
};

/// Layout of the composite truncated Hilbert space ancilla (x) R1 (x) R2.
///
/// A factor of dimension 1 is absent; partial traces produce such
/// geometries. The factories enforce the truncation floor for bosonic
/// modes (three levels, so that two-phonon jumps do not vanish).
class HilbertGeometry {
public:
  static HilbertGeometry with_tls(int n1, int n2);
  static HilbertGeometry with_oscillator(int ancilla_levels, int n1, int n2);
  static HilbertGeometry two_mode(int n1, int n2);
  static HilbertGeometry single_mode(int n);

  AncillaKind ancilla_kind() const { return kind_; }
  int ancilla_dim() const { return dims_[0]; }
  int fock_dim(int mode) const { return dims_[1 + mode]; }
  int dim(Site s) const { return dims_[static_cast<int>(s)]; }
  const std::array<int, 3>& dims() const { return dims_; }

  int total_dim() const { return dims_[0] * dims_[1] * dims_[2]; }
  /// Dimension of the resonator part R1 (x) R2.
  int resonator_dim() const { return dims_[1] * dims_[2]; }

  bool has_ancilla() const { return dims_[0] > 1; }
  bool is_two_mode() const { return dims_[0] == 1 && dims_[1] > 1 && dims_[2] > 1; }

  /// Geometry left after tracing out every site not in `keep`.
  HilbertGeometry reduced(const SiteSet& keep) const;

  std::string describe() const;

  friend bool operator==(const HilbertGeometry&, const HilbertGeometry&) = default;

private:
  HilbertGeometry(AncillaKind kind, std::array<int, 3> dims);

  AncillaKind kind_ = AncillaKind::None;
  std::array<int, 3> dims_{1, 1, 1};
};

} // namespace hotent
