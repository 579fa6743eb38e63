// SPDX-License-Identifier: Apache-2.0
//
// Minimal DIMACS front end over CaDiCaL, used to exercise the external
// solver route in tests. Prints SAT-competition style output.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "cadical.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: dimacs_solve <file.cnf>\n";
    return 2;
  }
  std::ifstream in(argv[1]);
  if (!in) {
    std::cerr << "cannot open " << argv[1] << '\n';
    return 2;
  }
  CaDiCaL::Solver solver;
  std::string line;
  int vars = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'p') {
      std::istringstream(line.substr(5)) >> vars;
      continue;
    }
    std::istringstream ls(line);
    int lit = 0;
    while (ls >> lit) solver.add(lit);
  }
  const int res = solver.solve();
  if (res == 20) {
    std::puts("s UNSATISFIABLE");
    return 20;
  }
  std::puts("s SATISFIABLE");
  std::string v = "v";
  for (int i = 1; i <= vars; ++i) {
    v += ' ';
    v += std::to_string(i <= solver.vars() ? solver.val(i) : -i);
    if (v.size() > 70) {
      std::puts(v.c_str());
      v = "v";
    }
  }
  v += " 0";
  std::puts(v.c_str());
  return 10;
}
