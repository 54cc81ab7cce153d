#pragma once

#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "latsym/errors.hpp"

namespace latsym {

/// Evaluator for the entry expression grammar: integers, decimals,
/// rationals p/q, pi, sqrt(n) for a positive integer n, the binary
/// operators * and / (left associative), and a leading unary minus.
/// There is no '+' in the grammar.
class ExprParser {
public:
    explicit ExprParser(const std::string& text) : text_(text) {}

    double parse() {
        skip_ws();
        const double v = expression();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing characters");
        return v;
    }

private:
    double expression() {
        bool negate = false;
        if (peek() == '-') {
            ++pos_;
            skip_ws();
            negate = true;
        }
        double v = term();
        skip_ws();
        while (peek() == '*' || peek() == '/') {
            const char op = text_[pos_++];
            skip_ws();
            const double rhs = term();
            if (op == '*')
                v *= rhs;
            else
                v /= rhs;
            skip_ws();
        }
        return negate ? -v : v;
    }

    double term() {
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            std::string word;
            while (std::isalpha(static_cast<unsigned char>(peek()))) word += text_[pos_++];
            if (word == "pi") return std::numbers::pi;
            if (word == "sqrt") {
                skip_ws();
                if (peek() != '(') fail("expected '(' after sqrt");
                ++pos_;
                skip_ws();
                if (!std::isdigit(static_cast<unsigned char>(peek())))
                    fail("sqrt takes a positive integer");
                double n = 0.0;
                while (std::isdigit(static_cast<unsigned char>(peek())))
                    n = 10.0 * n + (text_[pos_++] - '0');
                skip_ws();
                if (peek() != ')') fail("expected ')' after sqrt argument");
                ++pos_;
                if (n <= 0.0) fail("sqrt takes a positive integer");
                return std::sqrt(n);
            }
            pos_ = start;
            fail("unknown symbol '" + word + "'");
        }
        fail("expected a number, pi, or sqrt(n)");
        return 0.0;
    }

    double number() {
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (peek() == '.') {
            ++pos_;
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        }
        if (pos_ == start || (pos_ == start + 1 && text_[start] == '.'))
            fail("malformed number");
        return std::stod(text_.substr(start, pos_ - start));
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError(why + " in \"" + text_ + "\"", -1, static_cast<int>(pos_));
    }

    std::string text_;
    std::size_t pos_ = 0;
};

inline double parse_expression(const std::string& text) {
    return ExprParser(text).parse();
}

}  // namespace latsym
