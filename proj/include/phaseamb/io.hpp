#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "phaseamb/enumerate.hpp"
#include "phaseamb/generate.hpp"
#include "phaseamb/nonneg.hpp"
#include "phaseamb/signal.hpp"

namespace phaseamb::io {

// All numeric output uses 17 significant digits so double round-trips are
// lossless; readers accept anything std JSON parsing accepts.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

inline std::string escape_json(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

inline std::string double_array(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ", ";
    out += format_double(v[k]);
  }
  out += "]";
  return out;
}

inline std::string complex_object(const std::complex<double>& z) {
  return "{\"re\": " + format_double(z.real()) +
         ", \"im\": " + format_double(z.imag()) + "}";
}

inline std::string zeros_array(const std::vector<std::complex<double>>& zs) {
  std::string out = "[";
  for (std::size_t k = 0; k < zs.size(); ++k) {
    if (k) out += ", ";
    out += complex_object(zs[k]);
  }
  out += "]";
  return out;
}

inline std::string string_array(const std::vector<std::string>& v) {
  std::string out = "[";
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ", ";
    out += "\"" + escape_json(v[k]) + "\"";
  }
  out += "]";
  return out;
}

inline std::string to_json(const Signal& x) {
  std::string out = "{\n";
  out += "  \"offset\": " + std::to_string(x.offset()) + ",\n";
  out += "  \"values\": " + double_array(x.values()) + "\n";
  out += "}\n";
  return out;
}

inline std::string to_json(const Autocorrelation& a) {
  return "{\n  \"coeffs\": " + double_array(a.coeffs()) + "\n}\n";
}

inline std::string to_json(const std::vector<std::complex<double>>& zeros) {
  return zeros_array(zeros) + "\n";
}

inline std::string to_json(const AmbiguityReport& report) {
  std::string out = "{\n";
  out += "  \"total_classes\": " + std::to_string(report.total_classes) + ",\n";
  out += "  \"nonnegative_classes\": " +
         std::to_string(report.nonnegative_classes) + ",\n";
  out += "  \"upper_bound\": " + std::to_string(report.upper_bound) + ",\n";
  out += "  \"flippable_units\": " + std::to_string(report.flippable_units) +
         ",\n";
  out += "  \"solutions\": [";
  for (std::size_t k = 0; k < report.solutions.size(); ++k) {
    const auto& s = report.solutions[k];
    out += (k ? ",\n    {" : "\n    {");
    out += "\"values\": " + double_array(s.signal.values()) + ", ";
    out += "\"zeros\": " + zeros_array(s.chosen_zeros) + ", ";
    out += std::string("\"nonnegative\": ") + (s.nonnegative ? "true" : "false") +
           ", ";
    out += "\"min_component\": " + format_double(s.min_component) + "}";
  }
  out += report.solutions.empty() ? "],\n" : "\n  ],\n";
  out += "  \"warnings\": " + string_array(report.warnings) + "\n";
  out += "}\n";
  return out;
}

inline std::string to_json(const FeasibleRegion& region) {
  std::string out = "{\n";
  out += "  \"halfplane_re_max\": " + format_double(region.halfplane_re_max) +
         ",\n";
  out += "  \"excluded_discs\": [";
  for (std::size_t k = 0; k < region.discs.size(); ++k) {
    out += (k ? ",\n    {" : "\n    {");
    out += "\"center_re\": " + format_double(region.discs[k].center) + ", ";
    out += "\"radius\": " + format_double(region.discs[k].radius) + "}";
  }
  out += region.discs.empty() ? "]\n" : "\n  ]\n";
  out += "}\n";
  return out;
}

inline std::string perturb_csv(const PerturbStudy& study) {
  std::string out = "trial,max_root_displacement,total_classes,"
                    "nonnegative_classes\n";
  for (const auto& t : study.trials) {
    out += std::to_string(t.trial) + ",";
    if (t.ok) {
      out += format_double(t.max_root_displacement) + "," +
             std::to_string(t.total_classes) + "," +
             std::to_string(t.nonnegative_classes);
    } else {
      out += "nan,-1,-1";
    }
    out += "\n";
  }
  return out;
}

inline std::string solutions_csv(const AmbiguityReport& report,
                                 bool nonneg_only = false) {
  std::string out = "class,nonnegative,min_component,values\n";
  for (std::size_t k = 0; k < report.solutions.size(); ++k) {
    const auto& s = report.solutions[k];
    if (nonneg_only && !s.nonnegative) continue;
    out += std::to_string(k) + "," + (s.nonnegative ? "1" : "0") + "," +
           format_double(s.min_component) + ",";
    const auto& v = s.signal.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ";";
      out += format_double(v[i]);
    }
    out += "\n";
  }
  return out;
}

inline std::string raster_csv(const FeasibleRegion& region, double re_min,
                              double re_max, double im_min, double im_max,
                              double step) {
  if (!(step > 0.0))
    throw std::invalid_argument("raster: step must be positive");
  if (!(re_min <= re_max) || !(im_min <= im_max))
    throw std::invalid_argument("raster: empty window");
  const long long re_steps =
      static_cast<long long>(std::floor((re_max - re_min) / step + 1e-9)) + 1;
  const long long im_steps =
      static_cast<long long>(std::floor((im_max - im_min) / step + 1e-9)) + 1;
  if (re_steps * im_steps > 20000000)
    throw std::invalid_argument("raster: window too large");
  std::string out = "re,im,feasible\n";
  for (long long i = 0; i < im_steps; ++i) {
    const double im = im_min + static_cast<double>(i) * step;
    for (long long j = 0; j < re_steps; ++j) {
      const double re = re_min + static_cast<double>(j) * step;
      out += format_double(re) + "," + format_double(im) + "," +
             (region.contains({re, im}) ? "1" : "0") + "\n";
    }
  }
  return out;
}

// ---- readers ----

inline nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

inline Signal signal_from_json(const nlohmann::json& j,
                               const Tolerances& tol = {}) {
  if (!j.is_object() || !j.contains("values") || !j["values"].is_array())
    throw std::runtime_error("signal JSON must be {\"offset\", \"values\"}");
  std::vector<double> values;
  for (const auto& v : j["values"]) values.push_back(v.get<double>());
  const int offset = j.contains("offset") ? j["offset"].get<int>() : 0;
  return Signal(std::move(values), offset, tol.trim);
}

inline Autocorrelation autocorrelation_from_json(const nlohmann::json& j,
                                                 const Tolerances& tol = {}) {
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array())
    throw std::runtime_error("autocorrelation JSON must be {\"coeffs\"}");
  std::vector<double> coeffs;
  for (const auto& v : j["coeffs"]) coeffs.push_back(v.get<double>());
  return Autocorrelation(std::move(coeffs), tol);
}

inline std::vector<std::complex<double>> zeros_from_json(
    const nlohmann::json& j) {
  if (!j.is_array())
    throw std::runtime_error(
        "zero-set JSON must be [{\"re\", \"im\"}, ...]");
  std::vector<std::complex<double>> zeros;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("re") || !e.contains("im"))
      throw std::runtime_error("zero-set entry must carry \"re\" and \"im\"");
    zeros.emplace_back(e["re"].get<double>(), e["im"].get<double>());
  }
  return zeros;
}

inline Signal read_signal(const std::string& path, const Tolerances& tol = {}) {
  return signal_from_json(load_json(path), tol);
}

inline Autocorrelation read_autocorrelation(const std::string& path,
                                            const Tolerances& tol = {}) {
  return autocorrelation_from_json(load_json(path), tol);
}

inline std::vector<std::complex<double>> read_zeros(const std::string& path) {
  return zeros_from_json(load_json(path));
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace phaseamb::io
