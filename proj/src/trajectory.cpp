#include "pcgrasp/trajectory.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace pcgrasp {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, int row) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw PlanFormatError("row " + std::to_string(row) + ": bad number '" + s + "'");
  }
  if (used != s.size())
    throw PlanFormatError("row " + std::to_string(row) + ": bad number '" + s + "'");
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double TrajectoryPlan::dynamics_residual() const {
  double r = 0.0;
  for (int t = 0; t + 1 < steps(); ++t) {
    const Eigen::VectorXd e =
        positions.row(t + 1).transpose() - positions.row(t).transpose() - velocities.row(t).transpose() * dt;
    r = std::max(r, e.cwiseAbs().maxCoeff());
  }
  return r;
}

void export_plan(const TrajectoryPlan& plan, const std::filesystem::path& path) {
  if (plan.steps() == 0 || plan.dof() == 0) throw PlanFormatError("cannot export an empty plan");
  if (plan.velocities.rows() != plan.positions.rows() || plan.velocities.cols() != plan.positions.cols())
    throw PlanFormatError("positions and velocities differ in shape");
  std::ofstream out(path);
  if (!out) throw PlanFormatError("cannot write " + path.string());
  const int n = plan.dof();
  out << "t,dt";
  for (int j = 1; j <= n; ++j) out << ",q_" << j;
  for (int j = 1; j <= n; ++j) out << ",dq_" << j;
  out << '\n';
  for (int t = 0; t < plan.steps(); ++t) {
    out << t << ',' << fmt(plan.dt);
    for (int j = 0; j < n; ++j) out << ',' << fmt(plan.positions(t, j));
    for (int j = 0; j < n; ++j) out << ',' << fmt(plan.velocities(t, j));
    out << '\n';
  }
  if (!out) throw PlanFormatError("write failed for " + path.string());
}

TrajectoryPlan import_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PlanFormatError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw PlanFormatError("empty trajectory file");
  const auto header = split_csv(line);
  if (header.size() < 4 || header[0] != "t" || header[1] != "dt" || (header.size() - 2) % 2 != 0)
    throw PlanFormatError("bad trajectory header");
  const int n = static_cast<int>((header.size() - 2) / 2);
  for (int j = 0; j < n; ++j) {
    if (header[2 + j] != "q_" + std::to_string(j + 1) || header[2 + n + j] != "dq_" + std::to_string(j + 1))
      throw PlanFormatError("bad trajectory header");
  }
  std::vector<std::vector<double>> rows;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw PlanFormatError("row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                            " columns, got " + std::to_string(cells.size()));
    std::vector<double> values;
    for (const auto& c : cells) values.push_back(parse_double(c, row));
    if (values[0] != static_cast<double>(rows.size()))
      throw PlanFormatError("row " + std::to_string(row) + ": step index out of sequence");
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw PlanFormatError("trajectory has no rows");
  TrajectoryPlan plan;
  plan.dt = rows[0][1];
  plan.positions.resize(static_cast<Eigen::Index>(rows.size()), n);
  plan.velocities.resize(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    if (rows[t][1] != plan.dt) throw PlanFormatError("inconsistent dt");
    for (int j = 0; j < n; ++j) {
      plan.positions(static_cast<Eigen::Index>(t), j) = rows[t][2 + j];
      plan.velocities(static_cast<Eigen::Index>(t), j) = rows[t][2 + n + j];
    }
  }
  return plan;
}

}  // namespace pcgrasp
