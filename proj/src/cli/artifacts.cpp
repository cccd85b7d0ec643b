#include "mcflab/cli/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <memory>

#include <openssl/evp.h>

#include "mcflab/error.hpp"

namespace mcflab::cli {

using nlohmann::json;

namespace {

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// JSON has no infinities; encode non-finite values as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string csv_header(const FlowTrajectory& traj) {
  std::string h = "step,t,dt,max_A2,max_H2,min_kappa,min_H,area";
  for (const auto& k : traj.norms) h += "," + k.label();
  return h;
}

void write_steps_csv(const FlowTrajectory& traj, std::ostream& out) {
  out << csv_header(traj) << '\n';
  for (const auto& r : traj.steps) {
    out << r.step << ',' << exact(r.t) << ',' << exact(r.dt) << ',' << exact(r.max_A2) << ',' << exact(r.max_H2)
        << ',' << exact(r.min_kappa) << ',' << exact(r.min_H) << ',' << exact(r.area);
    for (double a : r.acc) out << ',' << exact(a);
    out << '\n';
  }
}

std::string svg_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series, bool log_y) {
  constexpr double W = 720, H = 480, L = 80, R = 160, T = 40, B = 60;
  constexpr std::size_t kMaxPoints = 2000;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};

  std::vector<Series> shown;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    Series p{s.label, {}, {}};
    const std::size_t stride = std::max<std::size_t>(1, s.x.size() / kMaxPoints);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i % stride != 0 && i + 1 != s.x.size()) continue;
      double y = s.y[i];
      if (log_y) {
        if (!(y > 0.0)) continue;
        y = std::log10(y);
      }
      if (!std::isfinite(y) || !std::isfinite(s.x[i])) continue;
      p.x.push_back(s.x[i]);
      p.y.push_back(y);
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
    shown.push_back(std::move(p));
  }
  if (!(x1 > x0)) { x0 = std::isfinite(x0) ? x0 - 1 : 0; x1 = x0 + 2; }
  if (!(y1 > y0)) { y0 = std::isfinite(y0) ? y0 - 1 : 0; y1 = y0 + 2; }
  const auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  const auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::string svg = R"(<?xml version="1.0" encoding="UTF-8"?>)" "\n";
  svg += R"(<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width=")" + fixed(W) + R"(" height=")" + fixed(H) +
         R"(" viewBox="0 0 )" + fixed(W) + " " + fixed(H) + "\">\n";
  svg += "<title>" + title + "</title>\n";
  svg += R"(<rect x="0" y="0" width=")" + fixed(W) + R"(" height=")" + fixed(H) + R"(" fill="white"/>)" "\n";
  svg += R"(<rect x=")" + fixed(L) + R"(" y=")" + fixed(T) + R"(" width=")" + fixed(W - L - R) + R"(" height=")" +
         fixed(H - T - B) + R"(" fill="none" stroke="black"/>)" "\n";
  svg += R"(<text x=")" + fixed(W / 2) + R"(" y="24" text-anchor="middle" font-size="16">)" + title + "</text>\n";
  svg += R"(<text x=")" + fixed((L + W - R) / 2) + R"(" y=")" + fixed(H - 16) +
         R"(" text-anchor="middle" font-size="13">)" + x_label + "</text>\n";
  svg += R"(<text x="18" y=")" + fixed((T + H - B) / 2) + R"(" text-anchor="middle" font-size="13" transform="rotate(-90 18 )" +
         fixed((T + H - B) / 2) + ")\">" + (log_y ? "log10 " + y_label : y_label) + "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
    svg += R"(<text x=")" + fixed(px(fx)) + R"(" y=")" + fixed(H - B + 18) + R"(" text-anchor="middle" font-size="11">)" +
           short_num(fx) + "</text>\n";
    svg += R"(<text x=")" + fixed(L - 6) + R"(" y=")" + fixed(py(fy) + 4) + R"(" text-anchor="end" font-size="11">)" +
           short_num(fy) + "</text>\n";
  }
  for (std::size_t s = 0; s < shown.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    std::string pts;
    for (std::size_t i = 0; i < shown[s].x.size(); ++i) {
      if (i) pts += ' ';
      pts += fixed(px(shown[s].x[i])) + "," + fixed(py(shown[s].y[i]));
    }
    if (pts.empty()) pts = fixed(L) + "," + fixed(H - B);
    svg += R"(<polyline fill="none" stroke-width="1.5" stroke=")" + std::string(color) + R"(" points=")" + pts + "\"/>\n";
    const double ly = T + 16 + 18.0 * s;
    svg += R"(<text x=")" + fixed(W - R + 10) + R"(" y=")" + fixed(ly) + R"(" font-size="12" fill=")" + color + "\">" +
           shown[s].label + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidConfig, "cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

json to_json(const MonitorReport& report) {
  json j;
  j["c_bound"] = report.c_bound() ? json(*report.c_bound()) : json();
  j["tightest_C"] = number(report.tightest_C());
  j["initial_mean_convex"] = report.mean_convex_initially();
  j["mean_convexity_preserved"] = report.mean_convexity_preserved();
  j["pinching_monotone"] = report.pinching_monotone();
  j["rows"] = report.rows().size();
  json events = json::array();
  for (const auto& e : report.events()) {
    events.push_back({{"kind", to_string(e.kind)}, {"t", number(e.t)}, {"value", number(e.value)}});
  }
  j["events"] = events;
  return j;
}

json to_json(const ExtensionReport& report) {
  json j;
  j["stop_reason"] = report.stop_reason ? json(to_string(*report.stop_reason)) : json();
  j["blew_up"] = report.blew_up;
  j["tightest_C"] = number(report.tightest_C);
  j["initial_mean_convex"] = report.initial_mean_convex;
  j["consistent"] = report.consistent;
  j["summary"] = report.summary;
  json norms = json::array();
  for (const auto& v : report.norms) {
    json n{{"norm", v.key.label()}, {"status", to_string(v.status)}, {"accumulated", number(v.accumulated)},
           {"note", v.note}};
    if (v.fit) {
      n["fit"] = {{"growth", to_string(v.fit->growth)},
                  {"rate_exponent", number(v.fit->rate_exponent)},
                  {"divergence_exponent", number(v.fit->divergence_exponent)},
                  {"finite_estimate", number(v.fit->finite_estimate)},
                  {"t_est", number(v.fit->t_est)},
                  {"t_from_oracle", v.fit->t_from_oracle},
                  {"samples", v.fit->samples},
                  {"rate_monotone_increasing", v.fit->rate_monotone_increasing}};
    }
    norms.push_back(n);
  }
  j["norms"] = norms;
  json theorems = json::array();
  for (const auto& t : report.theorems) {
    theorems.push_back({{"name", t.name},
                        {"pointwise_hypothesis", t.pointwise_hypothesis},
                        {"norm_status", to_string(t.norm_status)},
                        {"contradiction", t.contradiction},
                        {"diagnosis", t.diagnosis}});
  }
  j["criteria"] = theorems;
  return j;
}

json to_json(const StepRecord& r, const std::vector<NormKey>& norms) {
  json j{{"step", r.step},           {"t", number(r.t)},         {"dt", number(r.dt)},
         {"max_A2", number(r.max_A2)}, {"max_H2", number(r.max_H2)}, {"min_kappa", number(r.min_kappa)},
         {"min_H", number(r.min_H)},   {"area", number(r.area)}};
  for (std::size_t i = 0; i < norms.size() && i < r.acc.size(); ++i) j[norms[i].label()] = number(r.acc[i]);
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidConfig, "cannot write " + path.string());
  out << text;
}

}  // namespace mcflab::cli
