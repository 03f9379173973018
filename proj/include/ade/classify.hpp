#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ade/chart.hpp"
#include "ade/field.hpp"
#include "ade/series.hpp"
#include "ade/split.hpp"

namespace ade {

enum class VerdictKind {
  Regular,
  A,
  A_at_least,
  D,
  D_at_least,
  E6,
  E6_1,
  E7,
  E7_1,
  E8,
  E8_1_char3,
  E8_2_char3,
  E8_1_char5,
  NotSimple,
  Undetermined,
};

struct Verdict {
  VerdictKind kind = VerdictKind::Undetermined;
  int index = 0;           // k for A/D and the precision for the *_at_least kinds
  std::string reason;      // NotSimple / Undetermined only

  /// "Regular", "A2", "A_at_least(16)", "D5", "E6_1", "NotSimple", ...
  std::string name() const;
  static Verdict parse(const std::string& name);
  /// Anything but Undetermined.
  bool definite() const { return kind != VerdictKind::Undetermined; }
  /// Kinds that come with a normal form and a certificate.
  bool has_normal_form() const { return kind != VerdictKind::NotSimple && kind != VerdictKind::Undetermined; }
  /// Characteristic the verdict is restricted to, or 0.
  unsigned required_characteristic() const;

  friend bool operator==(const Verdict& a, const Verdict& b) { return a.kind == b.kind && a.index == b.index; }

  static Verdict of(VerdictKind kind, int index = 0) { return {kind, index, {}}; }
  static Verdict not_simple(std::string why) { return {VerdictKind::NotSimple, 0, std::move(why)}; }
  static Verdict undetermined(std::string why) { return {VerdictKind::Undetermined, 0, std::move(why)}; }
};

/// The table polynomial of a verdict in n variables: x_1 (and x_2 for D/E)
/// carry the singular part, the remaining variables are squares.
template <class F>
Series<F> normal_form(const Verdict& v, const FieldOf<F>& field, int n, int N);

/// unit * normal_form(change) == f, all modulo m^{N+1}.
template <class F>
struct Certificate {
  Verdict verdict;
  Series<F> normal_form;
  CoordinateChange<F> change;
  UnitWitness<F> unit;
  int precision;
};

template <class F>
struct Classification {
  Verdict verdict;
  std::optional<Certificate<F>> certificate;
};

struct ClassifyOptions {
  bool algebraically_closed_assumed = false;
};

template <class F>
Classification<F> classify(const Series<F>& f, const ClassifyOptions& options = {});

template <class F>
bool verify_certificate(const Series<F>& f, const Certificate<F>& cert);

// ---------------------------------------------------------------- stages

/// One-variable residual c t^{k+1} (unit): A(k) and the unit, or
/// A_at_least(N) for a zero residual.
template <class F>
struct AkReduction {
  Verdict verdict;
  Series<F> unit;
};

template <class F>
AkReduction<F> a_k_loop(const Series<F>& residual);

enum class JetKind { ThreeLines, DoubleLine, TripleLine };

/// Linear change putting the cubic jet of a two-variable series of order 3
/// into the position used downstream: a x1^3 (triple), a x1 x2^2 (double),
/// x1 (a x2^2 + b x1^2) (three lines through one rational line).
template <class F>
struct JetType {
  JetKind kind;
  CoordinateChange<F> change;
};

template <class F>
JetType<F> jet3_normal_form(const Series<F>& g);

/// g = theta y^3 + a(x) y^2 x^2 + b(x) y x^3 + c(x) x^4 for the cubed
/// variable y; a, b, c are series in x alone.
template <class F>
struct ECoefficients {
  int cubed_var;
  Series<F> theta, a, b, c;
};

template <class F>
ECoefficients<F> e_normalize(const Series<F>& g);

template <class F>
Classification<F> e_classify(const ECoefficients<F>& coeffs);

/// Two-variable order-3 series through the D or E branch, as classify does
/// for corank 2.
template <class F>
Classification<F> d_reduce(const Series<F>& g, const JetType<F>& jet);

/// Every term x^a y^b has a >= 3, or a >= 2 and b >= 2, or a >= 1 and b >= 4,
/// or b >= 6: membership in <x, y^2>^3 up to the precision.
template <class F>
bool ideal_cube_membership(const Series<F>& f, int x_index, int y_index);

}  // namespace ade
