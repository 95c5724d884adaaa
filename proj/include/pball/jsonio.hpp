#ifndef PBALL_JSONIO_HPP
#define PBALL_JSONIO_HPP

// Minimal ordered JSON writer. Keys appear in insertion order, numbers are
// printed with %.17g (full double precision), lines end with LF; identical
// inputs therefore produce byte-identical documents.

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace pball {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class JsonWriter {
  public:
    JsonWriter& begin_object() { return open('{', '}'); }
    JsonWriter& end_object() { return close('}'); }
    JsonWriter& begin_array() { return open('[', ']'); }
    JsonWriter& end_array() { return close(']'); }

    JsonWriter& key(const std::string& k) {
        if (stack_.empty() || stack_.back().array)
            throw std::logic_error("JsonWriter: key outside an object");
        comma();
        indent();
        out_ += '"';
        escape(k);
        out_ += "\": ";
        pending_key_ = true;
        return *this;
    }

    JsonWriter& value(double v) { return emit(format_double(v)); }
    JsonWriter& value(int v) { return emit(std::to_string(v)); }
    JsonWriter& value(long long v) { return emit(std::to_string(v)); }
    JsonWriter& value(std::size_t v) { return emit(std::to_string(v)); }
    JsonWriter& value(bool v) { return emit(v ? "true" : "false"); }
    JsonWriter& value(const char* s) { return value(std::string(s)); }
    JsonWriter& value(const std::string& s) {
        start_value();
        out_ += '"';
        escape(s);
        out_ += '"';
        return *this;
    }
    JsonWriter& null() { return emit("null"); }

    std::string str() const {
        if (!stack_.empty()) throw std::logic_error("JsonWriter: unbalanced document");
        return out_ + "\n";
    }

  private:
    struct Level {
        bool array = false;
        int count = 0;
    };

    JsonWriter& open(char c, char) {
        start_value();
        out_ += c;
        stack_.push_back({c == '[', 0});
        return *this;
    }

    JsonWriter& close(char c) {
        if (stack_.empty()) throw std::logic_error("JsonWriter: unbalanced close");
        const bool empty = stack_.back().count == 0;
        stack_.pop_back();
        if (!empty) {
            out_ += '\n';
            indent_only();
        }
        out_ += c;
        return *this;
    }

    JsonWriter& emit(const std::string& text) {
        start_value();
        out_ += text;
        return *this;
    }

    void start_value() {
        if (pending_key_) {
            pending_key_ = false;
        } else if (!stack_.empty()) {
            if (!stack_.back().array) throw std::logic_error("JsonWriter: value without key");
            comma();
            indent();
        } else if (!out_.empty()) {
            throw std::logic_error("JsonWriter: multiple roots");
        }
        if (!stack_.empty()) ++stack_.back().count;
    }

    void comma() {
        if (!stack_.empty() && stack_.back().count > 0) out_ += ',';
        out_ += '\n';
    }

    void indent() { indent_only(); }
    void indent_only() {
        for (std::size_t i = 0; i < stack_.size(); ++i) out_ += "  ";
    }

    void escape(const std::string& s) {
        for (char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\t': out_ += "\\t"; break;
                default: out_ += c;
            }
        }
    }

    std::string out_;
    std::vector<Level> stack_;
    bool pending_key_ = false;
};

} // namespace pball

#endif // PBALL_JSONIO_HPP
