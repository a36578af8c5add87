#include "mvfe/expression.hpp"

#include <cctype>

namespace mvfe {

namespace {

struct Token {
    enum class Kind { integer, ident, plus, minus, star, slash, caret,
                      lparen, rparen, end };
    Kind kind;
    std::string text;
    SourcePos pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& current() const { return current_; }

    void advance() {
        skip_space();
        current_.pos = pos_;
        if (at_ >= text_.size()) {
            current_.kind = Token::Kind::end;
            current_.text.clear();
            return;
        }
        char c = text_[at_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = at_;
            while (at_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[at_])))
                bump();
            current_.kind = Token::Kind::integer;
            current_.text = text_.substr(start, at_ - start);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = at_;
            while (at_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[at_])) ||
                    text_[at_] == '_'))
                bump();
            current_.kind = Token::Kind::ident;
            current_.text = text_.substr(start, at_ - start);
            return;
        }
        switch (c) {
            case '+': current_.kind = Token::Kind::plus; break;
            case '-': current_.kind = Token::Kind::minus; break;
            case '*': current_.kind = Token::Kind::star; break;
            case '/': current_.kind = Token::Kind::slash; break;
            case '^': current_.kind = Token::Kind::caret; break;
            case '(': current_.kind = Token::Kind::lparen; break;
            case ')': current_.kind = Token::Kind::rparen; break;
            default:
                throw parse_error(std::string("unexpected character '") + c +
                                      "'",
                                  pos_);
        }
        current_.text = c;
        bump();
    }

private:
    void bump() {
        if (text_[at_] == '\n') {
            ++pos_.line;
            pos_.col = 1;
        } else {
            ++pos_.col;
        }
        ++at_;
    }

    void skip_space() {
        while (at_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[at_])))
            bump();
    }

    const std::string& text_;
    std::size_t at_ = 0;
    SourcePos pos_;
    Token current_;
};

class Parser {
public:
    Parser(const std::string& text, VarTablePtr table)
        : lexer_(text), table_(std::move(table)) {}

    Series parse() {
        Series value = sum();
        if (lexer_.current().kind != Token::Kind::end)
            throw parse_error("unexpected trailing input", lexer_.current().pos);
        return value;
    }

private:
    Series sum() {
        Series value = product();
        while (true) {
            auto kind = lexer_.current().kind;
            if (kind == Token::Kind::plus) {
                lexer_.advance();
                value = value + product();
            } else if (kind == Token::Kind::minus) {
                lexer_.advance();
                value = value - product();
            } else {
                return value;
            }
        }
    }

    Series product() {
        Series value = unary();
        while (true) {
            auto kind = lexer_.current().kind;
            if (kind == Token::Kind::star) {
                lexer_.advance();
                value = value * unary();
            } else if (kind == Token::Kind::slash) {
                SourcePos slash_pos = lexer_.current().pos;
                lexer_.advance();
                Series denominator = unary();
                try {
                    value = value * invert(denominator);
                } catch (const parse_error&) {
                    throw;
                } catch (const error& e) {
                    throw parse_error(
                        std::string("denominator is not invertible (") +
                            e.what() + ")",
                        slash_pos);
                }
            } else {
                return value;
            }
        }
    }

    Series unary() {
        if (lexer_.current().kind == Token::Kind::minus) {
            lexer_.advance();
            return -unary();
        }
        if (lexer_.current().kind == Token::Kind::plus) {
            lexer_.advance();
            return unary();
        }
        return power();
    }

    Series power() {
        Series base = atom();
        if (lexer_.current().kind != Token::Kind::caret) return base;
        lexer_.advance();
        const Token& t = lexer_.current();
        if (t.kind != Token::Kind::integer)
            throw parse_error("exponent must be a nonnegative integer literal",
                              t.pos);
        unsigned long n = 0;
        try {
            n = std::stoul(t.text);
        } catch (const std::exception&) {
            throw parse_error("exponent out of range", t.pos);
        }
        if (n > kMaxExponent)
            throw parse_error("exponent out of range", t.pos);
        lexer_.advance();
        try {
            return pow(base, static_cast<std::uint32_t>(n));
        } catch (const error& e) {
            throw parse_error(e.what(), t.pos);
        }
    }

    Series atom() {
        const Token t = lexer_.current();
        switch (t.kind) {
            case Token::Kind::integer: {
                lexer_.advance();
                Integer value;
                if (value.set_str(t.text, 10) != 0)
                    throw parse_error("malformed integer literal", t.pos);
                return Series::constant(table_, Rational(value));
            }
            case Token::Kind::ident: {
                if (!table_->has(t.text))
                    throw parse_error("unknown variable '" + t.text + "'",
                                      t.pos);
                lexer_.advance();
                return Series::variable(table_, t.text);
            }
            case Token::Kind::lparen: {
                lexer_.advance();
                Series inner = sum();
                if (lexer_.current().kind != Token::Kind::rparen)
                    throw parse_error("expected ')'", lexer_.current().pos);
                lexer_.advance();
                return inner;
            }
            default:
                throw parse_error("expected a value", t.pos);
        }
    }

    Lexer lexer_;
    VarTablePtr table_;
};

}  // namespace

Series parse_expression(const std::string& text, VarTablePtr table) {
    if (!table) throw error("null variable table");
    return Parser(text, std::move(table)).parse();
}

}  // namespace mvfe
