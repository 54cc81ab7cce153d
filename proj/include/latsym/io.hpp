#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "latsym/expr.hpp"
#include "latsym/matrix.hpp"

namespace latsym {

/// Parses a matrix document {"d": int, "entries": [[...], ...]} where each
/// entry is a JSON number or an expression string. Entries must form a
/// 2d x 2d array.
inline LatticeMatrix parse_matrix(const std::string& text, double tol = kTolDet) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("d") || !doc.contains("entries"))
        throw ParseError("document must be an object with keys 'd' and 'entries'");
    if (!doc["d"].is_number_integer() || doc["d"].get<int>() < 1)
        throw ParseError("'d' must be a positive integer");
    const int d = doc["d"].get<int>();
    const auto& entries = doc["entries"];
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(2 * d))
        throw ParseError("'entries' must be a 2d x 2d array");
    Mat m(2 * d, 2 * d);
    for (int i = 0; i < 2 * d; ++i) {
        const auto& row = entries[i];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(2 * d))
            throw ParseError("'entries' row " + std::to_string(i + 1) + " has wrong length",
                             i + 1, -1);
        for (int j = 0; j < 2 * d; ++j) {
            const auto& cell = row[j];
            if (cell.is_number()) {
                m(i, j) = cell.get<double>();
            } else if (cell.is_string()) {
                try {
                    m(i, j) = parse_expression(cell.get<std::string>());
                } catch (const ParseError& e) {
                    throw ParseError("entry (" + std::to_string(i + 1) + ", " +
                                         std::to_string(j + 1) + "): " + e.what(),
                                     i + 1, j + 1);
                }
            } else {
                throw ParseError("entry (" + std::to_string(i + 1) + ", " +
                                     std::to_string(j + 1) + ") must be a number or string",
                                 i + 1, j + 1);
            }
        }
    }
    return make_lattice_matrix(d, m, tol);
}

/// 64-bit FNV-1a digest of the raw document bytes, as fixed-width hex.
inline std::string input_digest(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

/// Formats a double with 17 significant digits (lossless round trip).
inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

/// Minimal ordered-JSON emitter for reports: keys appear exactly in
/// insertion order and numbers use the 17-digit format, so identical runs
/// produce byte-identical documents.
class JsonWriter {
public:
    JsonWriter& begin_object() {
        sep();
        out_ += '{';
        stack_.push_back(true);
        return *this;
    }
    JsonWriter& end_object() {
        out_ += '}';
        stack_.pop_back();
        fresh_ = false;
        return *this;
    }
    JsonWriter& begin_array() {
        sep();
        out_ += '[';
        stack_.push_back(true);
        return *this;
    }
    JsonWriter& end_array() {
        out_ += ']';
        stack_.pop_back();
        fresh_ = false;
        return *this;
    }
    JsonWriter& key(const std::string& k) {
        sep();
        out_ += quote(k) + ":";
        fresh_ = true;
        return *this;
    }
    JsonWriter& value(double v) {
        sep();
        out_ += format_number(v);
        return *this;
    }
    JsonWriter& value(int v) {
        sep();
        out_ += std::to_string(v);
        return *this;
    }
    JsonWriter& value(bool v) {
        sep();
        out_ += v ? "true" : "false";
        return *this;
    }
    JsonWriter& value(const std::string& v) {
        sep();
        out_ += quote(v);
        return *this;
    }
    JsonWriter& null() {
        sep();
        out_ += "null";
        return *this;
    }
    JsonWriter& matrix(const Mat& m) {
        begin_array();
        for (int i = 0; i < m.rows(); ++i) {
            begin_array();
            for (int j = 0; j < m.cols(); ++j) value(m(i, j));
            end_array();
        }
        end_array();
        return *this;
    }
    JsonWriter& vector(const Vec& v) {
        begin_array();
        for (int i = 0; i < v.size(); ++i) value(v(i));
        end_array();
        return *this;
    }
    const std::string& str() const { return out_; }

private:
    static std::string quote(const std::string& s) {
        std::string q = "\"";
        for (const char c : s) {
            if (c == '"' || c == '\\') {
                q += '\\';
                q += c;
            } else if (c == '\n') {
                q += "\\n";
            } else {
                q += c;
            }
        }
        q += '"';
        return q;
    }
    void sep() {
        if (!fresh_ && !out_.empty()) {
            const char last = out_.back();
            if (last != '{' && last != '[' && last != ':') out_ += ',';
        }
        fresh_ = false;
    }

    std::string out_;
    std::vector<bool> stack_;
    bool fresh_ = false;
};

/// Renders a parsed matrix back to a document; reparsing yields
/// bit-identical entries.
inline std::string render_matrix(const LatticeMatrix& a) {
    JsonWriter w;
    w.begin_object();
    w.key("d").value(a.d);
    w.key("entries").matrix(a.m);
    w.end_object();
    return w.str();
}

}  // namespace latsym
