#pragma once

// Type-erased scalar fields.  A field is a complex function of a coordinate
// vector that can be evaluated on plain complex numbers, on `Dual` numbers
// and on `Jet`s, so the same definition serves point evaluation, first
// derivatives and higher-order differential operators.
//
// Coordinate layout:
//   noncompact picture: (t, x₁, …, x_n)
//   compact picture:    (φ, θ, x̂₁, …, x̂_n)

#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "wavebasis/jet.hpp"

namespace wavebasis {

enum class Picture { noncompact, compact };

class Field {
 public:
  Field() = default;

  /// `g` is a generic callable g(std::span<const T>) -> T for T ∈ {cplx, Dual, Jet}.
  template <class G>
  static Field from_generic(Picture picture, int n, G g) {
    Field f;
    f.picture_ = picture;
    f.n_ = n;
    f.c_ = [g](std::span<const cplx> c) { return g(c); };
    f.d_ = [g](std::span<const Dual> c) { return g(c); };
    f.j_ = [g](std::span<const Jet> c) { return g(c); };
    return f;
  }

  Picture picture() const { return picture_; }
  /// Spatial dimension n.
  int n() const { return n_; }
  /// Number of coordinates: n+1 (noncompact) or n+2 (compact).
  int arity() const { return picture_ == Picture::noncompact ? n_ + 1 : n_ + 2; }
  explicit operator bool() const { return static_cast<bool>(c_); }

  cplx operator()(std::span<const cplx> c) const { return c_(c); }
  Dual operator()(std::span<const Dual> c) const { return d_(c); }
  Jet operator()(std::span<const Jet> c) const { return j_(c); }
  cplx operator()(std::span<const double> c) const {
    std::vector<cplx> z(c.begin(), c.end());
    return c_(z);
  }
  cplx operator()(std::initializer_list<double> c) const {
    std::vector<cplx> z(c.begin(), c.end());
    return c_(z);
  }

  /// Value and derivative along coordinate `var` at a point.
  Dual directional(std::span<const double> c, int var) const {
    std::vector<Dual> z(c.begin(), c.end());
    z[var].d = 1.0;
    return d_(z);
  }

 private:
  Picture picture_ = Picture::noncompact;
  int n_ = 0;
  std::function<cplx(std::span<const cplx>)> c_;
  std::function<Dual(std::span<const Dual>)> d_;
  std::function<Jet(std::span<const Jet>)> j_;
};

}  // namespace wavebasis
