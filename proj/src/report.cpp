#include <cstdio>
#include <ostream>
#include <sstream>

#include "fcl/conslaw.hpp"

namespace fcl {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void write_report_csv(std::ostream& os, const std::vector<ResidualReport>& rows, const std::string& comment) {
  if (!comment.empty()) {
    std::istringstream lines(comment);
    for (std::string line; std::getline(lines, line);) os << "# " << line << '\n';
  }
  os << "provenance_id,kind,alpha,n_steps,n_x,Linf,L2,excluded_nodes,convergence_ratio\n";
  for (const auto& r : rows) {
    os << r.provenance << ',' << to_string(r.kind) << ',' << num(r.alpha) << ',' << r.n_steps << ',' << r.n_x << ','
       << num(r.Linf) << ',' << num(r.L2) << ',' << r.excluded_nodes << ','
       << (r.convergence_ratio ? num(*r.convergence_ratio) : std::string()) << '\n';
  }
}

}  // namespace fcl
