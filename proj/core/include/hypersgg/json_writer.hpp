#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hypersgg {

// Fixed 17-significant-digit scientific notation ("%.16e"). Every double in
// a serialized artifact goes through this so outputs diff byte-for-byte
// across platforms and parse back to the identical value.
std::string format_double(double value);

// Minimal streaming JSON emitter with deterministic, locale-independent
// output. Key/value order is exactly the call order; no whitespace is
// inserted beyond what the caller writes.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view name);
  JsonWriter& value(std::string_view text);
  JsonWriter& value(const char* text) { return value(std::string_view(text)); }
  JsonWriter& value(double number);
  JsonWriter& value(std::int64_t number);
  JsonWriter& value(int number) { return value(static_cast<std::int64_t>(number)); }
  JsonWriter& value(std::uint64_t number);
  JsonWriter& value(bool flag);
  JsonWriter& value_null();

  const std::string& str() const { return out_; }
  std::string take() { return std::move(out_); }

  static std::string escape(std::string_view text);

 private:
  void comma();
  std::string out_;
  std::vector<bool> has_item_;  // per open scope
};

}  // namespace hypersgg
