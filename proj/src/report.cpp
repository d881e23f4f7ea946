#include "qmix/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "qmix/eigen.hpp"

namespace qmix {

std::string format_double(double x) {
    if (!std::isfinite(x)) throw InternalError("format_double: non-finite value in report");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

JsonWriter::JsonWriter(std::ostream& out) : out_(out) {}

void JsonWriter::newline_indent() {
    out_ << '\n';
    for (std::size_t i = 0; i < stack_.size(); ++i) out_ << "  ";
}

void JsonWriter::before_item() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (stack_.empty()) return;
    if (stack_.back().has_items) out_ << ',';
    newline_indent();
    stack_.back().has_items = true;
}

JsonWriter& JsonWriter::begin_object() {
    before_item();
    out_ << '{';
    stack_.push_back({'{'});
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    if (stack_.empty() || stack_.back().kind != '{')
        throw InternalError("JsonWriter: mismatched end_object");
    const bool had_items = stack_.back().has_items;
    stack_.pop_back();
    if (had_items) newline_indent();
    out_ << '}';
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    before_item();
    out_ << '[';
    stack_.push_back({'['});
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    if (stack_.empty() || stack_.back().kind != '[')
        throw InternalError("JsonWriter: mismatched end_array");
    const bool had_items = stack_.back().has_items;
    stack_.pop_back();
    if (had_items) newline_indent();
    out_ << ']';
    return *this;
}

JsonWriter& JsonWriter::key(std::string_view name) {
    if (stack_.empty() || stack_.back().kind != '{' || pending_key_)
        throw InternalError("JsonWriter: key outside object");
    before_item();
    write_string(name);
    out_ << ": ";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double x) {
    before_item();
    out_ << format_double(x);
    return *this;
}

JsonWriter& JsonWriter::value(bool b) {
    before_item();
    out_ << (b ? "true" : "false");
    return *this;
}

JsonWriter& JsonWriter::value(std::int64_t x) {
    before_item();
    out_ << x;
    return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t x) {
    before_item();
    out_ << x;
    return *this;
}

JsonWriter& JsonWriter::value(std::string_view s) {
    before_item();
    write_string(s);
    return *this;
}

void JsonWriter::write_string(std::string_view s) {
    out_ << '"';
    for (char ch : s) {
        switch (ch) {
            case '"': out_ << "\\\""; break;
            case '\\': out_ << "\\\\"; break;
            case '\n': out_ << "\\n"; break;
            case '\r': out_ << "\\r"; break;
            case '\t': out_ << "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out_ << buf;
                } else {
                    out_ << ch;
                }
        }
    }
    out_ << '"';
}

void JsonWriter::finish() {
    if (!stack_.empty() || pending_key_)
        throw InternalError("JsonWriter: finish with open containers");
    out_ << '\n';
}

CsvWriter::CsvWriter(std::ostream& out, std::size_t fields_per_record)
    : out_(out), fields_per_record_(fields_per_record) {}

void CsvWriter::record(const std::vector<std::string>& fields) {
    if (fields.size() != fields_per_record_)
        throw InternalError("CsvWriter: inconsistent field count");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        const std::string& f = fields[i];
        const bool needs_quote = f.find_first_of(",\"\r\n") != std::string::npos;
        if (!needs_quote) {
            out_ << f;
            continue;
        }
        out_ << '"';
        for (char ch : f) {
            if (ch == '"') out_ << '"';
            out_ << ch;
        }
        out_ << '"';
    }
    out_ << "\r\n";
}

} // namespace qmix
