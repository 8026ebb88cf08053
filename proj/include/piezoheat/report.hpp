#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "piezoheat/spectral.hpp"

namespace piezoheat {

// Deterministic artifact emission: insertion-ordered keys, doubles printed
// with %.17g in JSON and %.12g in CSV, so identical runs produce identical
// bytes.

std::string json_double(double v);
std::string csv_double(double v);

class JsonWriter {
public:
  JsonWriter& key(const std::string& k, double v);
  JsonWriter& key(const std::string& k, const std::string& v);
  JsonWriter& key(const std::string& k, long long v);
  JsonWriter& key(const std::string& k, bool v);
  JsonWriter& key_array(const std::string& k, const std::vector<double>& v);
  JsonWriter& key_complex_array(const std::string& k,
                                const std::vector<std::complex<double>>& v);
  JsonWriter& key_object(const std::string& k, const std::map<std::string, std::string>& kv);
  JsonWriter& key_raw(const std::string& k, const std::string& raw_json);
  std::string str() const;

private:
  std::vector<std::pair<std::string, std::string>> items_;
};

void write_trace_csv(const EnergyTrace& trace, std::ostream& os);

} // namespace piezoheat
