#pragma once

#include <span>
#include <vector>

#include "morrey/ball.hpp"
#include "morrey/grid.hpp"
#include "morrey/operators.hpp"
#include "morrey/quadrature.hpp"

namespace morrey {

/// A (q, lambda)-atom: supported in its ball, mean zero, and
/// ||a||_q <= r^(-lambda/p) with p the conjugate exponent of q.
struct Atom {
  Field field;
  Ball ball;
  double q;
  double lambda;

  double p() const noexcept { return q / (q - 1.0); }
};

/// Restricts the profile to the ball, removes its ball mean and rescales so
/// that ||a||_q = r^(-lambda/p). Throws DegenerateAtom when the profile is
/// constant on the ball.
Atom make_atom(const Field& profile, const Ball& ball, double q, double lambda);

struct AtomCheck {
  bool support_ok = false;
  double cancellation = 0.0;  // |sum a h^n| / ||a||_1
  bool cancellation_ok = false;
  double size_ratio = 0.0;    // ||a||_q r^(lambda/p)
  bool size_ok = false;

  bool ok() const noexcept { return support_ok && cancellation_ok && size_ok; }
};
AtomCheck check_atom(const Atom& atom);

/// Bilinear pairing sum f g h^n (no conjugation).
cplx pair(const Field& f, const Field& g);

/// ||f||_{L^p(B)} ||a||_q, the Hoelder bound of |pair(f, a)|.
double holder_bound(const Field& f, const Atom& atom);

struct DualIdentity {
  cplx lhs;
  cplx rhs;
  double gap;  // |lhs - rhs|
  int nodes;
  double t_min;
  double t_max;
};

/// lhs = pair(f, (I - P_{r^m}) g);
/// rhs = b_m sum_j pair(Q_s (I - P_s) f, Q_s (I - P_{r^m}) g) w_j, s = t_j^m.
/// Throws TruncationError when the time grid does not span the grid's symbols.
DualIdentity dual_identity_check(const Field& f, const Field& g, const Ball& ball,
                                 const GeneratorSpec& gen, const LogTimeGrid& tgrid);

struct PairingMass {
  double mass;   // b_m sum_j sum_x |F_j G_j| h^n w_j
  double ratio;  // mass / (r^(lambda/p) ||g||_q)
};
PairingMass pairing_mass(const Field& f, const Atom& g, const GeneratorSpec& gen,
                         const LogTimeGrid& tgrid);

/// Two atoms per ball: the extremal profile conj(f - f_B) |f - f_B|^(p-2) and
/// an oscillation sin(pi (x_1 - c_1) / r). Degenerate profiles are skipped.
std::vector<Atom> atom_family(const Field& f, const BallSet& balls, double q, double lambda);

/// max over the family of |pair(f, a)|; zero for an empty family.
double atomic_lower_bound(const Field& f, std::span<const Atom> family);

}  // namespace morrey
