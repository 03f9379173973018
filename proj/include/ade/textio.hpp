#pragma once

#include <string>
#include <vector>

#include "ade/series.hpp"

namespace ade {

template <class F>
struct ParsedSeries {
  Series<F> series;
  int dropped_terms;  // terms of degree > N in the expanded input
};

/// Polynomial text: sums and differences of terms, a term being a product
/// (explicit '*' or juxtaposition) of integers, fractions a/b, variables
/// and parenthesized expressions, each optionally raised to ^k.
/// Variables are a letter followed by digits or underscores, so "xy" is x*y.
template <class F>
ParsedSeries<F> parse_polynomial(const std::string& text, const std::vector<std::string>& vars,
                                 const FieldOf<F>& field, int N);

/// Inverse of parse_polynomial: "x^2 + 3*x*y - 1/2*y^3", "0" for zero.
/// Fp coefficients use symmetric residues.
template <class F>
std::string render(const Series<F>& f, const std::vector<std::string>& vars);

/// Variable names appearing in the text, sorted.
std::vector<std::string> detect_variables(const std::string& text);

/// "x,y,z" -> {x, y, z}; rejects empty, malformed or repeated names.
std::vector<std::string> parse_variable_list(const std::string& csv);

}  // namespace ade
