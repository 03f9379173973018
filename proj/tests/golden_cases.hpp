#pragma once

#include <string>
#include <vector>

// CLI runs whose stdout is pinned in tests/golden/<name>.out. "@DIR@" in an
// argument stands for the golden directory. tools/regen_golden.sh rewrites
// the files from this table.
struct GoldenCase {
  std::string name;
  std::vector<std::string> args;
  int exit_code;
};

inline const std::vector<GoldenCase>& golden_cases() {
  static const std::vector<GoldenCase> cases = {
      {"classify_a2_fp7", {"classify", "x^2+y^3", "--field", "fp:7", "--precision", "12"}, 0},
      {"classify_e6_1_fp3", {"classify", "x^3+y^4+x^2*y^2", "--field", "fp:3"}, 0},
      {"classify_e8_1_char5", {"classify", "x^3+y^5+x*y^4", "--field", "fp:5", "--precision", "16"}, 0},
      {"classify_d5_q_three_vars", {"classify", "x*y^2+x^4+z^2", "--precision", "8"}, 0},
      {"classify_seeded", {"classify", "x^2+y^3", "--field", "fp:11", "--precision", "6", "--seed", "42"}, 0},
      {"classify_dropped_terms", {"classify", "x^2+y^3+y^9", "--precision", "6"}, 0},
      {"classify_a_at_least", {"classify", "x^2", "--vars", "x,y", "--precision", "10"}, 0},
      {"classify_not_simple", {"classify", "x^4+y^4", "--field", "fp:7"}, 0},
      {"classify_undetermined", {"classify", "x*y*(x+y)"}, 2},
      {"classify_text", {"classify", "1/2 x^2", "--field", "fp:3", "--format", "text"}, 0},
      {"classify_input_file", {"classify", "--input", "@DIR@/e7_input.txt", "--field", "fp:11", "--precision", "12"}, 0},
      {"error_syntax", {"classify", "x^2+*y"}, 1},
      {"error_unknown_variable", {"classify", "x^2+y^3", "--vars", "x"}, 1},
      {"error_char_two", {"classify", "x^2", "--field", "fp:2"}, 1},
      {"error_low_precision", {"classify", "x^2", "--precision", "2"}, 1},
      {"error_division_by_p", {"classify", "x^2+1/3*y^3", "--field", "fp:3"}, 1},
      {"split_q", {"split", "x^2+2*x*y+y^3+z^2", "--precision", "5"}, 0},
      {"verify_ok", {"verify", "--cert", "@DIR@/cert_d6.json", "--field", "fp:13"}, 0},
      {"verify_tampered", {"verify", "--cert", "@DIR@/cert_d6_tampered.json", "--field", "fp:13"}, 1},
      {"verify_other_input", {"verify", "x*y^2+x^5+z^2+x^7", "--cert", "@DIR@/cert_d6.json", "--field", "fp:13"}, 1},
      {"mf_build_e6", {"mf-build", "--verdict", "E6", "--vars", "x,y", "--field", "fp:7", "--precision", "8"}, 0},
      {"mf_build_d5_three_vars", {"mf-build", "--verdict", "D5", "--vars", "x,y,z", "--precision", "8"}, 0},
      {"mf_sharp", {"mf-sharp", "--mf", "@DIR@/mf_a2.json", "--var", "z"}, 0},
      {"mf_flat", {"mf-flat", "--mf", "@DIR@/mf_a2_sharp.json", "--var", "z"}, 0},
      {"mf_verify_ok", {"mf-verify", "--mf", "@DIR@/mf_a2.json"}, 0},
      {"mf_verify_bad", {"mf-verify", "--mf", "@DIR@/mf_bad.json"}, 1},
      {"batch_classify", {"classify", "--batch", "@DIR@/batch_input.txt", "--field", "fp:7", "--precision", "10"}, 1},
      {"batch_all_definite", {"classify", "--batch", "@DIR@/batch_definite.txt", "--field", "fp:11", "--precision", "10"}, 0},
  };
  return cases;
}
