#pragma once

#include "cellwork/abgrp.hpp"

namespace cellwork::builtins {

inline AbGroup z() { return AbGroup::free(1); }
inline AbGroup z2() { return AbGroup::free(2); }

/// B = <(1,0)>, C = <(1,p)> inside Z^2 over A = 0. A pullback square whose
/// mediating arrow Z^2 -> Z^2 has cokernel Z/p.
inline Square reg_pullback(int p = 2) {
  const AbGroup zero = zero_object();
  return Square{zero_hom(zero, z()), zero_hom(zero, z()), Hom(z(), z2(), IntMatrix::from_rows({{1}, {p}})),
                Hom(z(), z2(), IntMatrix::from_rows({{1}, {0}}))};
}

/// B = <(1,0)>, C = <(0,1)> inside Z^2 over A = 0: the mediating arrow is the identity.
inline Square coordinate_pullback() {
  const AbGroup zero = zero_object();
  return Square{zero_hom(zero, z()), zero_hom(zero, z()), Hom(z(), z2(), IntMatrix::from_rows({{0}, {1}})),
                Hom(z(), z2(), IntMatrix::from_rows({{1}, {0}}))};
}

struct Composable {
  Hom f;  // A -> B
  Hom g;  // B -> C
};

/// f: Z -> Z + Z/p the coprojection, g the projection back; gf = id while coker f = Z/p.
inline Composable left_cancel_coprojection(int p = 2) {
  const AbGroup b = direct_sum(z(), AbGroup::cyclic(p));
  return Composable{Hom(z(), b, IntMatrix::from_rows({{1}, {0}})), Hom(b, z(), IntMatrix::from_rows({{1, 0}}))};
}

/// f: Z -> Z^2, 1 -> (2,1), followed by the identity of Z^2. Here coker f = Z, so f is in M.
inline Composable left_cancel_hand_triple() {
  return Composable{Hom(z(), z2(), IntMatrix::from_rows({{2}, {1}})), identity(z2())};
}

/// Span 0 -> Z, 0 -> Z with its pushout square (D = Z^2) and the collapsed square (D = Z, u = v = id).
struct SquarePair {
  Square first;
  Square second;
};

inline SquarePair indiscrete_pair() {
  const AbGroup zero = zero_object();
  Span s{zero_hom(zero, z()), zero_hom(zero, z())};
  PushoutResult po = pushout(s);
  return SquarePair{pushout_square(po), Square{s.f, s.g, identity(z()), identity(z())}};
}

}  // namespace cellwork::builtins
