#include "mhdreg/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "mhdreg/errors.hpp"
#include "parse_util.hpp"

namespace mhdreg {
namespace {

void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

std::ptrdiff_t first_spec(const MonitorSeries& series, CriterionKind kind) {
  const auto& specs = series.specs();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].kind == kind) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

nlohmann::json spec_json(const TestFunctionSpec& spec) {
  nlohmann::json bumps = nlohmann::json::array();
  for (const Bump& b : spec.bumps) {
    bumps.push_back({{"center", b.center}, {"sigma", b.sigma}, {"amplitude", b.amplitude}});
  }
  return {{"family", std::string(to_string(spec.family))}, {"seed", spec.seed}, {"bumps", bumps}};
}

}  // namespace

std::string monitor_csv(const MonitorSeries& series) {
  std::string out = kMonitorCsvHeader;
  out += '\n';
  const auto iu = first_spec(series, CriterionKind::velocity_z);
  const auto ip = first_spec(series, CriterionKind::pressure_z);
  std::vector<double> zres, h1res, l4res;
  if (series.size() >= 3) {
    zres = identity_residuals(series, Identity::zderiv);
    h1res = identity_residuals(series, Identity::h1);
    l4res = identity_residuals(series, Identity::l4);
  } else {
    zres.assign(series.size(), 0.0);
    h1res = l4res = zres;
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const SampleRecord& s = series[k];
    const double row[] = {
        s.t,
        s.kinetic_energy,
        s.magnetic_energy,
        s.grad_u_sq,
        s.grad_b_sq,
        iu >= 0 ? s.criterion_norms[iu] : 0.0,
        iu >= 0 ? series.criterion_integral(iu, k) : 0.0,
        ip >= 0 ? s.criterion_norms[ip] : 0.0,
        ip >= 0 ? series.criterion_integral(ip, k) : 0.0,
        series.dissipation_integral(k),
        energy_residual(series, k),
        zres[k],
        h1res[k],
        l4res[k],
        s.div_u_max,
        s.div_b_max,
    };
    for (std::size_t c = 0; c < std::size(row); ++c) {
      if (c) out += ',';
      append_number(out, row[c]);
    }
    out += '\n';
  }
  return out;
}

void emit_monitor_csv(const MonitorSeries& series, const std::filesystem::path& path) {
  write_text_atomic(path, monitor_csv(series));
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  const auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw IoError("csv line " + std::to_string(lineno) + ": expected " +
                    std::to_string(table.header.size()) + " fields");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      const std::string t(detail::trim(c));
      std::optional<double> v;
      if (t == "nan" || t == "-nan") {
        v = std::numeric_limits<double>::quiet_NaN();
      } else if (t == "-inf") {
        v = -HUGE_VAL;
      } else {
        v = detail::parse_real(t);
      }
      if (!v) throw IoError("csv line " + std::to_string(lineno) + ": bad number '" + c + "'");
      row.push_back(*v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_csv(buf.str());
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string inequality_report_json(const std::vector<InequalityRun>& runs) {
  nlohmann::json doc;
  doc["note"] = "sup_ratio is an empirical lower bound on the inequality constant";
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : runs) {
    nlohmann::json params = {{"inequality", std::string(to_string(r.which.which))}};
    switch (r.which.which) {
      case Inequality::A1:
        params["mu"] = r.which.mu;
        params["lambda"] = r.which.lambda;
        params["gamma"] = gamma_of(r.which.mu, r.which.lambda);
        break;
      case Inequality::A2:
        params["mu"] = r.which.mu;
        params["gamma"] = 3.0 * r.which.mu;
        break;
      case Inequality::A6:
        params["q"] = r.which.q;
        break;
    }
    nlohmann::json ratios = nlohmann::json::array();
    for (double v : r.result.ratios) {
      if (std::isfinite(v)) {
        ratios.push_back(v);
      } else {
        ratios.push_back(nullptr);
      }
    }
    list.push_back({{"params", params},
                    {"family", std::string(to_string(r.family))},
                    {"trials", r.trials},
                    {"skipped", r.result.skipped},
                    {"seed", r.seed},
                    {"grid", {{"n", r.grid_n}, {"box_length", r.box_length}}},
                    {"sup_ratio", r.result.sup_ratio},
                    {"argmax", r.result.argmax},
                    {"argmax_spec", spec_json(r.result.argmax_spec)},
                    {"ratios", ratios}});
  }
  doc["runs"] = list;
  return doc.dump(2) + "\n";
}

void emit_report_json(const std::vector<InequalityRun>& runs, const std::filesystem::path& path) {
  write_text_atomic(path, inequality_report_json(runs));
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

}  // namespace mhdreg
