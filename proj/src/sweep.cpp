#include "qlim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "qlim/errors.hpp"
#include "qlim/format.hpp"
#include "qlim/qcrb.hpp"

namespace qlim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double fixed_readout_theta(const ReadoutConfig& r) {
  if (r.mode == "fixed-theta") return qcrb::ReadoutAngle::canonical(r.theta).theta;
  return 0.0;  // phase quadrature
}

}  // namespace

std::vector<SweepRow> run_sweep(const RunConfig& config) {
  config.validate();
  const DetectorAssembly det(config.detector_params());
  const SqueezeProfile state = config.squeeze.make();
  const TestMass& mass = det.test_mass();
  const double arm = config.arm_length_m;
  const double theta_fixed = fixed_readout_theta(config.readout);
  const bool fixed_is_opt = (config.readout.mode == "optimal");

  const std::vector<double> freqs = frequency_grid(config.grid);
  std::vector<SweepRow> rows;
  rows.reserve(freqs.size());

  for (double f : freqs) {
    const double w = kTwoPi * f;
    SweepRow row;
    row.f_hz = f;
    row.sqrt_sql = std::sqrt(qcrb::sql(mass, w)) / arm;
    try {
      const qcrb::FrequencyAnalysis an(det, state, w);
      const qcrb::ThetaChoice opt = an.optimal_theta();
      const double sigma_opt = an.sigma_xx(opt.theta.theta);
      const double bound = an.qcrb();
      const qcrb::RminDiagnostics rd = an.rmin_diagnostics();
      row.sqrt_qcrb = std::sqrt(bound) / arm;
      row.sqrt_sigma_opt = std::sqrt(sigma_opt) / arm;
      row.sqrt_sigma_phase = fixed_is_opt
                                 ? row.sqrt_sigma_opt
                                 : std::sqrt(an.sigma_xx(theta_fixed)) / arm;
      row.theta_opt_rad = opt.theta.theta;
      row.ratio_amp = std::sqrt(sigma_opt / bound);
      row.rmin_over_half_hbar = rd.r_min_grid / (0.5 * an.hbar());
    } catch (const SingularLoopError&) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.sqrt_qcrb = row.sqrt_sigma_phase = row.sqrt_sigma_opt = nan;
      row.theta_opt_rad = row.ratio_amp = row.rmin_over_half_hbar = nan;
      row.flag = "singular-loop";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_csv(const std::vector<SweepRow>& rows,
                       const RunConfig& config) {
  // single-sided presentation: x2 under the square root = xsqrt(2) amplitude
  const double amp = (config.output.sided == "single") ? std::numbers::sqrt2 : 1.0;
  std::ostringstream o;
  o << "f_hz,sqrt_qcrb,sqrt_sql,sqrt_sigma_phase,sqrt_sigma_opt,"
       "theta_opt_rad,ratio_amp,rmin_over_half_hbar,flag\n";
  for (const SweepRow& r : rows) {
    o << fmt17(r.f_hz) << ',' << fmt17(amp * r.sqrt_qcrb) << ','
      << fmt17(amp * r.sqrt_sql) << ',' << fmt17(amp * r.sqrt_sigma_phase)
      << ',' << fmt17(amp * r.sqrt_sigma_opt) << ',' << fmt17(r.theta_opt_rad)
      << ',' << fmt17(r.ratio_amp) << ',' << fmt17(r.rmin_over_half_hbar)
      << ',' << r.flag << '\n';
  }
  return o.str();
}

namespace {

// JSON has no NaN literal; flagged singular rows carry null instead
std::string json_num(double v) { return std::isfinite(v) ? fmt17(v) : "null"; }

}  // namespace

std::string render_json(const std::vector<SweepRow>& rows,
                        const RunConfig& config) {
  const double amp = (config.output.sided == "single") ? std::numbers::sqrt2 : 1.0;
  std::ostringstream o;
  o << "{\n  \"rows\": [\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& r = rows[i];
    o << "    {\"f_hz\": " << json_num(r.f_hz)
      << ", \"sqrt_qcrb\": " << json_num(amp * r.sqrt_qcrb)
      << ", \"sqrt_sql\": " << json_num(amp * r.sqrt_sql)
      << ", \"sqrt_sigma_phase\": " << json_num(amp * r.sqrt_sigma_phase)
      << ", \"sqrt_sigma_opt\": " << json_num(amp * r.sqrt_sigma_opt)
      << ", \"theta_opt_rad\": " << json_num(r.theta_opt_rad)
      << ", \"ratio_amp\": " << json_num(r.ratio_amp)
      << ", \"rmin_over_half_hbar\": " << json_num(r.rmin_over_half_hbar)
      << ", \"flag\": \"" << r.flag << "\"}" << (i + 1 < rows.size() ? "," : "")
      << "\n";
  }
  o << "  ]\n}\n";
  return o.str();
}

namespace {

struct Series {
  const char* name;
  const char* color;
  double SweepRow::* field;
};

}  // namespace

std::string render_svg(const std::vector<SweepRow>& rows,
                       const RunConfig& config) {
  const double amp = (config.output.sided == "single") ? std::numbers::sqrt2 : 1.0;
  const Series series[4] = {
      {"sqrt_qcrb", "#1f77b4", &SweepRow::sqrt_qcrb},
      {"sqrt_sql", "#7f7f7f", &SweepRow::sqrt_sql},
      {"sqrt_sigma_phase", "#d62728", &SweepRow::sqrt_sigma_phase},
      {"sqrt_sigma_opt", "#2ca02c", &SweepRow::sqrt_sigma_opt},
  };

  double xmin = std::numeric_limits<double>::infinity(), xmax = 0.0;
  double ymin = std::numeric_limits<double>::infinity(), ymax = 0.0;
  for (const SweepRow& r : rows) {
    if (!(r.f_hz > 0.0)) continue;
    xmin = std::min(xmin, r.f_hz);
    xmax = std::max(xmax, r.f_hz);
    for (const Series& s : series) {
      const double v = amp * (r.*(s.field));
      if (std::isfinite(v) && v > 0.0) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
      }
    }
  }
  if (!(xmax > xmin) || !(ymax > ymin)) {
    xmin = 1.0; xmax = 10.0; ymin = 1e-25; ymax = 1e-20;
  }

  const double w = 900.0, h = 600.0;
  const double ml = 90.0, mr = 30.0, mt = 40.0, mb = 70.0;
  const double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
  const double ly0 = std::log10(ymin), ly1 = std::log10(ymax);
  const auto px = [&](double f) {
    return ml + (std::log10(f) - lx0) / (lx1 - lx0) * (w - ml - mr);
  };
  const auto py = [&](double v) {
    return h - mb - (std::log10(v) - ly0) / (ly1 - ly0) * (h - mt - mb);
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
    << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  o << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << w - ml - mr
    << "\" height=\"" << h - mt - mb
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  // decade ticks
  for (int d = static_cast<int>(std::ceil(lx0)); d <= std::floor(lx1); ++d) {
    const double x = px(std::pow(10.0, d));
    o << "<line x1=\"" << x << "\" y1=\"" << h - mb << "\" x2=\"" << x
      << "\" y2=\"" << h - mb + 6 << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << x << "\" y=\"" << h - mb + 22
      << "\" font-size=\"13\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ly0)); d <= std::floor(ly1); ++d) {
    const double y = py(std::pow(10.0, d));
    o << "<line x1=\"" << ml - 6 << "\" y1=\"" << y << "\" x2=\"" << ml
      << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << ml - 10 << "\" y=\"" << y + 4
      << "\" font-size=\"13\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  o << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 18
    << "\" font-size=\"15\" text-anchor=\"middle\">frequency [Hz]</text>\n";
  o << "<text x=\"22\" y=\"" << (mt + h - mb) / 2
    << "\" font-size=\"15\" text-anchor=\"middle\" transform=\"rotate(-90 22 "
    << (mt + h - mb) / 2 << ")\">strain amplitude [1/sqrt(Hz)]</text>\n";

  int li = 0;
  for (const Series& s : series) {
    o << "<polyline fill=\"none\" stroke=\"" << s.color
      << "\" stroke-width=\"1.6\" points=\"";
    for (const SweepRow& r : rows) {
      const double v = amp * (r.*(s.field));
      if (!(r.f_hz > 0.0) || !std::isfinite(v) || !(v > 0.0)) continue;
      o << px(r.f_hz) << ',' << py(v) << ' ';
    }
    o << "\"/>\n";
    o << "<text x=\"" << w - mr - 180 << "\" y=\"" << mt + 20 + 18 * li
      << "\" font-size=\"13\" fill=\"" << s.color << "\">" << s.name
      << "</text>\n";
    ++li;
  }
  o << "</svg>\n";
  return o.str();
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

std::vector<std::string> emit(const std::vector<SweepRow>& rows,
                              const RunConfig& config) {
  if (rows.empty()) throw std::invalid_argument("emit: no rows to write");
  std::vector<std::string> written;
  const std::string& path = config.output.path;
  if (config.output.format == "json")
    write_file(path, render_json(rows, config));
  else
    write_file(path, render_csv(rows, config));
  written.push_back(path);
  if (config.output.svg) {
    const std::string svg_path = path + ".svg";
    write_file(svg_path, render_svg(rows, config));
    written.push_back(svg_path);
  }
  return written;
}

}  // namespace qlim
