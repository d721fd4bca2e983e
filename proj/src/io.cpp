#include "hypocns/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hypocns {

using nlohmann::json;

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_key(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

const char* const kLeading[] = {"time", "E0", "E_s", "script_E0", "script_D0", "script_E1", "script_D1"};
const char* const kTrailing[] = {"besov_neg_half", "low_freq_energy", "mean_a",
                                 "momentum",       "min_density",     "viscous_dissipation"};
constexpr std::string_view kSobolevPrefix = "sobolev_";

double parse_double(const std::string& text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    // from_chars rejects "inf"/"nan" spellings produced by printf
    if (text == "nan" || text == "-nan") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::runtime_error("malformed number '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

json fit_json(const FitEntry& f) {
  json j = {{"s1", f.s1}, {"predicted", f.predicted}};
  if (f.fit) {
    j["exponent"] = f.fit->exponent;
    j["prefactor"] = f.fit->prefactor;
    j["r_squared"] = f.fit->r_squared;
    j["n_samples"] = f.fit->n_samples;
    j["relative_gap"] = std::abs(f.fit->exponent - f.predicted) / std::abs(f.predicted);
  } else {
    j["error"] = f.error;
  }
  return j;
}

}  // namespace

std::vector<std::string> trajectory_columns(const std::vector<double>& s1_values) {
  std::vector<std::string> cols(std::begin(kLeading), std::end(kLeading));
  for (double s1 : s1_values) cols.push_back(std::string(kSobolevPrefix) + format_key(s1));
  cols.insert(cols.end(), std::begin(kTrailing), std::end(kTrailing));
  return cols;
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<FunctionalSample>& samples,
                          const std::vector<double>& s1_values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const auto cols = trajectory_columns(s1_values);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& s : samples) {
    std::vector<double> row = {s.time, s.E0, s.E_s, s.script_E0, s.script_D0, s.script_E1, s.script_D1};
    for (double s1 : s1_values) row.push_back(s.sobolev(s1));
    for (double v : {s.besov_neg_half, s.low_freq_energy, s.mean_a, s.momentum, s.min_density,
                     s.viscous_dissipation}) {
      row.push_back(v);
    }
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

TrajectoryTable read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trajectory file");
  const auto header = split(line);

  TrajectoryTable table;
  for (const auto& col : header) {
    if (col.rfind(kSobolevPrefix, 0) == 0) {
      table.s1_values.push_back(parse_double(col.substr(kSobolevPrefix.size())));
    }
  }
  if (header != trajectory_columns(table.s1_values)) {
    throw std::runtime_error("unexpected trajectory header in " + path.string());
  }

  const std::size_t n_lead = std::size(kLeading);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw std::runtime_error("ragged trajectory row");
    std::vector<double> v;
    v.reserve(cells.size());
    for (const auto& c : cells) v.push_back(parse_double(c));
    FunctionalSample s;
    s.time = v[0];
    s.E0 = v[1];
    s.E_s = v[2];
    s.script_E0 = v[3];
    s.script_D0 = v[4];
    s.script_E1 = v[5];
    s.script_D1 = v[6];
    for (std::size_t i = 0; i < table.s1_values.size(); ++i) {
      s.sobolev_norms[table.s1_values[i]] = v[n_lead + i];
    }
    const std::size_t t0 = n_lead + table.s1_values.size();
    s.besov_neg_half = v[t0];
    s.low_freq_energy = v[t0 + 1];
    s.mean_a = v[t0 + 2];
    s.momentum = v[t0 + 3];
    s.min_density = v[t0 + 4];
    s.viscous_dissipation = v[t0 + 5];
    table.samples.push_back(std::move(s));
  }
  return table;
}

std::string fits_to_json(const std::vector<FitEntry>& fits, std::pair<double, double> window) {
  json j;
  j["window"] = {window.first, window.second};
  j["fits"] = json::array();
  for (const auto& f : fits) j["fits"].push_back(fit_json(f));
  return j.dump(2) + "\n";
}

std::string run_report_to_json(const ExperimentResult& r) {
  json j;
  j["status"] = to_string(r.run.status);
  j["message"] = r.run.message;
  j["warnings"] = r.run.warnings;
  j["steps"] = r.run.steps;
  j["samples"] = r.run.samples.size();
  j["initial_data"] = {{"hs_norm", r.data_report.hs_norm},
                       {"l2_norm", r.data_report.l2_norm},
                       {"gradient_norm", r.data_report.gradient_norm},
                       {"besov_neg_half", r.data_report.besov_neg_half},
                       {"mass_a", r.data_report.mass_a},
                       {"mass_u", r.data_report.mass_u}};
  j["guards"] = json::array();
  for (const auto& g : r.guards) j["guards"].push_back({{"name", g.name}, {"passed", g.passed}, {"detail", g.detail}});
  j["k_audit"] = {{"k_initial", r.k_audit.k_initial},
                  {"k_final", r.k_audit.k_final},
                  {"ratio", r.k_audit.ratio},
                  {"halvings", r.k_audit.halvings},
                  {"passed", r.k_audit.passed}};
  j["conservation"] = {{"mean_drift", r.conservation.mean_drift},
                       {"momentum_drift", r.conservation.momentum_drift},
                       {"momentum_scale", r.conservation.momentum_scale},
                       {"passed", r.conservation.passed}};
  return j.dump(2) + "\n";
}

std::string oracle_report_to_json(const OracleOptions& o, double reference_constant_squared,
                                  const LowerBoundReport* report) {
  json j;
  j["reference"] = {{"c0", o.ref_c0},
                    {"eta", o.ref_eta},
                    {"s1", o.ref_s1},
                    {"beta", o.ref_beta},
                    {"C_beta_squared", reference_constant_squared},
                    {"C_beta", std::sqrt(reference_constant_squared)}};
  if (report != nullptr) {
    json lb = {{"c0", report->c0},
               {"eta", report->eta},
               {"s1", report->s1},
               {"C_beta_squared", report->constant_squared},
               {"threshold", report->threshold},
               {"min_ratio", report->min_ratio},
               {"passed", report->passed}};
    json failing = json::array();
    for (const auto& e : report->entries) {
      if (e.ratio < report->threshold) failing.push_back(e.time);
    }
    lb["failing_times"] = failing;
    j["lower_bound"] = lb;
  }
  return j.dump(2) + "\n";
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "beta,gamma,amplitude,s1,fitted_exponent,predicted_exponent,abs_gap,rel_gap,status,run_directory\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << format_double(r.beta) << ',' << format_double(r.gamma) << ',' << format_double(r.amplitude)
        << ',' << format_double(r.s1) << ',' << format_double(r.fitted) << ','
        << format_double(r.predicted) << ',' << format_double(r.abs_gap) << ','
        << format_double(r.rel_gap) << ',' << status << ',' << r.run_directory << '\n';
  }
}

std::string decay_svg(const std::vector<FunctionalSample>& samples, const std::vector<FitEntry>& fits) {
  constexpr double kWidth = 720;
  constexpr double kHeight = 480;
  constexpr double kMargin = 60;
  const char* const colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const auto& s : samples) {
    const double x = std::log10(1.0 + s.time);
    for (const auto& f : fits) {
      const double v = s.sobolev_norms.count(f.s1) ? s.sobolev(f.s1) : 0.0;
      if (!(v > 0.0)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, std::log10(v));
      ymax = std::max(ymax, std::log10(v));
    }
  }
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!(xmax > xmin) || !(ymax > ymin)) {
    svg << "<text x=\"" << kMargin << "\" y=\"" << kMargin << "\">no data to plot</text>\n</svg>\n";
    return svg.str();
  }
  auto px = [&](double x) { return kMargin + (x - xmin) / (xmax - xmin) * (kWidth - 2 * kMargin); };
  auto py = [&](double y) { return kHeight - kMargin - (y - ymin) / (ymax - ymin) * (kHeight - 2 * kMargin); };

  svg << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin
      << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\""
      << kHeight - kMargin << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 20 << "\">log10(1+t)</text>\n"
      << "<text x=\"10\" y=\"" << kMargin - 20 << "\">log10 norm</text>\n";
  for (int k = static_cast<int>(std::ceil(xmin)); k <= static_cast<int>(std::floor(xmax)); ++k) {
    svg << "<text x=\"" << px(k) - 4 << "\" y=\"" << kHeight - kMargin + 16 << "\">" << k << "</text>\n";
  }
  for (int k = static_cast<int>(std::ceil(ymin)); k <= static_cast<int>(std::floor(ymax)); ++k) {
    svg << "<text x=\"" << kMargin - 30 << "\" y=\"" << py(k) + 4 << "\">" << k << "</text>\n";
  }

  std::size_t idx = 0;
  for (const auto& f : fits) {
    const char* color = colors[idx % std::size(colors)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& s : samples) {
      if (!s.sobolev_norms.count(f.s1)) continue;
      const double v = s.sobolev(f.s1);
      if (!(v > 0.0)) continue;
      svg << px(std::log10(1.0 + s.time)) << ',' << py(std::log10(v)) << ' ';
    }
    svg << "\"/>\n";
    if (f.fit) {
      const double x0 = std::log10(1.0 + f.fit->window.first);
      const double x1 = std::log10(1.0 + f.fit->window.second);
      const double y0 = std::log10(f.fit->prefactor) + f.fit->exponent * x0;
      const double y1 = std::log10(f.fit->prefactor) + f.fit->exponent * x1;
      const double z1 = y0 + f.predicted * (x1 - x0);
      svg << "<line x1=\"" << px(x0) << "\" y1=\"" << py(y0) << "\" x2=\"" << px(x1) << "\" y2=\""
          << py(y1) << "\" stroke=\"" << color << "\" stroke-dasharray=\"6,3\"/>\n";
      svg << "<line x1=\"" << px(x0) << "\" y1=\"" << py(y0) << "\" x2=\"" << px(x1) << "\" y2=\""
          << py(z1) << "\" stroke=\"gray\" stroke-dasharray=\"2,2\"/>\n";
    }
    char label[160];
    std::snprintf(label, sizeof label, "s1=%g fit %s predicted %.4f", f.s1,
                  f.fit ? format_double(f.fit->exponent).substr(0, 7).c_str() : "n/a", f.predicted);
    svg << "<text x=\"" << kWidth - kMargin - 260 << "\" y=\"" << kMargin + 16.0 * static_cast<double>(idx)
        << "\" fill=\"" << color << "\">" << label << "</text>\n";
    ++idx;
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace hypocns
