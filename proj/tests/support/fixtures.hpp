#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "gvn/analysis.hpp"
#include "gvn/program.hpp"

namespace gvn::testing {

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(GVN_FIXTURES) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Program fixture(const std::string& name) { return parse_program(read_fixture(name)); }

inline Term T(const std::string& text) { return parse_term(text); }

inline Sed sed_at(const Program& p, Algo algo, const std::string& point) {
  return std::get<Sed>(AnalysisResult::run(p, algo).state(point));
}

inline std::vector<std::string> strings(const std::vector<Term>& ts) {
  std::vector<std::string> out;
  for (const Term& t : ts) out.push_back(t.to_string());
  return out;
}

}  // namespace gvn::testing
