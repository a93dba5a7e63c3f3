#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bergman/weights.hpp"

namespace bergman {

// phi families for the thm10 construction:
//   power[:A]  ((1-t)/2)^A, default A = 2*beta so that psi(x) = log2(2x)
//   log        1/(2 + log(1/(1-t)))
//   exp:c      exp(-c/(1-t)), decays too fast and is rejected
struct PhiSpec {
  std::string family = "power";
  double param = 0.0;  // 0 selects the default exponent for "power"
};

struct Thm10Params {
  std::string base = "pow";
  double alpha = 1.0;
  PhiSpec phi;
  int N = -1;  // -1: smallest index passing the proof's inequalities
};

struct Prop12Params {
  double c = 1.0;  // psi(x) = c * log2(1 + x)
  int N = -1;
};

// t_n = 1 - 2^(-2^n); s_n = 1 - 1/(n 2^(2^n)).
double prop9_t_gap(int n);
double prop9_s_gap(int n);

RadialWeight build_prop9_weight();
RadialWeight build_thm10_weight(const Thm10Params& params);
RadialWeight build_thm10_weight(const RadialWeight& base, const PhiSpec& phi, int N = -1);
RadialWeight build_prop12_weight(const Prop12Params& params = {});

// Parses the text after "construct:" starting at `offset` in `dsl`.
RadialWeight parse_construct(const std::string& dsl, std::size_t offset);

struct TableRow {
  double r;
  double omega;
  double log_tail;
};
// Samples r, w(r), log tail(r) on a grid refined towards the boundary.
std::vector<TableRow> construct_table(const RadialWeight& w, int points_per_octave = 4, int octaves = 40);

}  // namespace bergman
