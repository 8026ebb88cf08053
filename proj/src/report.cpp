#include "piezoheat/report.hpp"

#include <cstdio>

namespace piezoheat {

std::string json_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

} // namespace

JsonWriter& JsonWriter::key(const std::string& k, double v) {
  items_.emplace_back(k, json_double(v));
  return *this;
}
JsonWriter& JsonWriter::key(const std::string& k, const std::string& v) {
  items_.emplace_back(k, quote(v));
  return *this;
}
JsonWriter& JsonWriter::key(const std::string& k, long long v) {
  items_.emplace_back(k, std::to_string(v));
  return *this;
}
JsonWriter& JsonWriter::key(const std::string& k, bool v) {
  items_.emplace_back(k, v ? "true" : "false");
  return *this;
}
JsonWriter& JsonWriter::key_array(const std::string& k, const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += json_double(v[i]);
  }
  items_.emplace_back(k, s + "]");
  return *this;
}
JsonWriter& JsonWriter::key_complex_array(const std::string& k,
                                          const std::vector<std::complex<double>>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += "[" + json_double(v[i].real()) + "," + json_double(v[i].imag()) + "]";
  }
  items_.emplace_back(k, s + "]");
  return *this;
}
JsonWriter& JsonWriter::key_object(const std::string& k,
                                   const std::map<std::string, std::string>& kv) {
  std::string s = "{";
  bool first = true;
  for (const auto& [kk, vv] : kv) {
    if (!first) s += ",";
    first = false;
    s += quote(kk) + ": " + quote(vv);
  }
  items_.emplace_back(k, s + "}");
  return *this;
}
JsonWriter& JsonWriter::key_raw(const std::string& k, const std::string& raw_json) {
  items_.emplace_back(k, raw_json);
  return *this;
}

std::string JsonWriter::str() const {
  std::string s = "{\n";
  for (std::size_t i = 0; i < items_.size(); ++i) {
    s += "  " + quote(items_[i].first) + ": " + items_[i].second;
    if (i + 1 < items_.size()) s += ",";
    s += "\n";
  }
  return s + "}\n";
}

void write_trace_csv(const EnergyTrace& trace, std::ostream& os) {
  os << "t, E_total, TE, MechKE, MagKE, PE, ElectroMechE, DiffE, dissipation_residual\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const EnergyBreakdown& e = trace.breakdowns[i];
    os << csv_double(trace.times[i]) << "," << csv_double(e.total) << "," << csv_double(e.te)
       << "," << csv_double(e.mech_ke) << "," << csv_double(e.mag_ke) << "," << csv_double(e.pe)
       << "," << csv_double(e.electromech_e) << "," << csv_double(e.diff_e) << ","
       << csv_double(trace.dissipation_residuals[i]) << "\n";
  }
}

} // namespace piezoheat
