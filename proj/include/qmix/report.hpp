// Deterministic report emission: streaming JSON and RFC-4180 CSV writers.
// All floating-point values are serialized with 17 significant digits so a
// re-run with identical inputs produces byte-identical output.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qmix {

// Malformed user input (files, family strings, flag values). Mapped to
// exit code 2 by the CLI.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// %.17g; throws InternalError on non-finite values.
std::string format_double(double x);

class JsonWriter {
public:
    explicit JsonWriter(std::ostream& out);

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view name);

    JsonWriter& value(double x);
    JsonWriter& value(bool b);
    JsonWriter& value(int x) { return value(static_cast<std::int64_t>(x)); }
    JsonWriter& value(std::int64_t x);
    JsonWriter& value(std::uint64_t x);
    JsonWriter& value(std::string_view s);
    JsonWriter& value(const char* s) { return value(std::string_view(s)); }

    // key + scalar in one step
    template <typename T>
    JsonWriter& kv(std::string_view name, const T& v) {
        key(name);
        return value(v);
    }

    void finish(); // newline; asserts all containers closed

private:
    void before_item();
    void newline_indent();
    void write_string(std::string_view s);

    std::ostream& out_;
    struct Level {
        char kind;      // '{' or '['
        bool has_items = false;
    };
    std::vector<Level> stack_;
    bool pending_key_ = false;
};

// RFC-4180: comma-separated fields, CRLF record ends, quoting only when a
// field needs it. Every record must carry the same field count.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::size_t fields_per_record);

    void record(const std::vector<std::string>& fields);

private:
    std::ostream& out_;
    std::size_t fields_per_record_;
};

} // namespace qmix
