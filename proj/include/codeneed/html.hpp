#pragma once
// Forgiving scanner for rendered HTML fragments (question bodies are not full
// documents). Keeps a stack of open tags; unclosed tags auto-close at end of
// input, stray closing tags are ignored.
//
// Two consumers: text extraction (tag boundaries become spaces, <code>
// contents are captured separately) and block-code detection (<code> nested
// anywhere under <pre>).

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace codeneed::html {

struct StripResult {
    std::string plain;                   // text outside <code>, tags replaced by spaces
    std::vector<std::string> code_spans; // inner text of each top-level <code> element
    bool block_code = false;             // some <code> opened while a <pre> was open
};

namespace detail {

inline bool is_void_element(std::string_view name) {
    return name == "br" || name == "hr" || name == "img" || name == "input" ||
           name == "meta" || name == "link" || name == "area" || name == "col" ||
           name == "source" || name == "wbr";
}

inline void append_utf8(std::string& out, unsigned long cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xc0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3f));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xe0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
        out += static_cast<char>(0x80 | (cp & 0x3f));
    } else if (cp < 0x110000) {
        out += static_cast<char>(0xf0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3f));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
        out += static_cast<char>(0x80 | (cp & 0x3f));
    }
}

// Decodes the entity starting at html[pos] ('&'). Returns the index just past
// the entity and appends the decoded text, or returns pos+1 and appends '&'
// when the sequence is not a recognized entity.
inline std::size_t decode_entity(std::string_view html, std::size_t pos, std::string& out) {
    std::size_t semi = html.find(';', pos + 1);
    if (semi == std::string_view::npos || semi - pos > 12) {
        out += '&';
        return pos + 1;
    }
    std::string_view body = html.substr(pos + 1, semi - pos - 1);
    if (body == "lt") {
        out += '<';
    } else if (body == "gt") {
        out += '>';
    } else if (body == "amp") {
        out += '&';
    } else if (body == "quot") {
        out += '"';
    } else if (body == "apos") {
        out += '\'';
    } else if (body.size() > 1 && body[0] == '#') {
        bool hex = body.size() > 2 && (body[1] == 'x' || body[1] == 'X');
        std::string_view digits = body.substr(hex ? 2 : 1);
        if (digits.empty()) {
            out += '&';
            return pos + 1;
        }
        unsigned long cp = 0;
        for (char c : digits) {
            int d;
            if (c >= '0' && c <= '9') {
                d = c - '0';
            } else if (hex && c >= 'a' && c <= 'f') {
                d = c - 'a' + 10;
            } else if (hex && c >= 'A' && c <= 'F') {
                d = c - 'A' + 10;
            } else {
                out += '&';
                return pos + 1;
            }
            cp = cp * (hex ? 16 : 10) + static_cast<unsigned long>(d);
            if (cp > 0x10ffff) {
                out += '&';
                return pos + 1;
            }
        }
        append_utf8(out, cp);
    } else {
        out += '&';
        return pos + 1;
    }
    return semi + 1;
}

} // namespace detail

inline StripResult strip(std::string_view body_html) {
    StripResult result;
    std::vector<std::string> open_tags;
    int pre_depth = 0;
    int code_depth = 0;
    std::string current_span;

    auto emit = [&](char c) {
        if (code_depth > 0) {
            current_span += c;
        } else {
            result.plain += c;
        }
    };

    auto close_one = [&](const std::string& name) {
        if (name == "pre") {
            --pre_depth;
        } else if (name == "code") {
            --code_depth;
            if (code_depth == 0) {
                result.code_spans.push_back(std::move(current_span));
                current_span.clear();
            }
        }
    };

    std::size_t i = 0;
    const std::size_t n = body_html.size();
    while (i < n) {
        char c = body_html[i];
        if (c == '&') {
            std::string decoded;
            i = detail::decode_entity(body_html, i, decoded);
            for (char d : decoded) emit(d);
            continue;
        }
        if (c != '<') {
            emit(c);
            ++i;
            continue;
        }

        // Comment?
        if (body_html.compare(i, 4, "<!--") == 0) {
            std::size_t end = body_html.find("-->", i + 4);
            i = (end == std::string_view::npos) ? n : end + 3;
            if (code_depth == 0) result.plain += ' ';
            continue;
        }

        bool closing = i + 1 < n && body_html[i + 1] == '/';
        std::size_t name_start = i + (closing ? 2 : 1);
        if (name_start >= n || (!std::isalpha(static_cast<unsigned char>(body_html[name_start])) &&
                                body_html[name_start] != '!')) {
            // Not a tag; literal '<'.
            emit('<');
            ++i;
            continue;
        }

        // Find the end of the tag, honoring quoted attribute values.
        std::size_t j = name_start;
        char quote = 0;
        while (j < n) {
            char t = body_html[j];
            if (quote != 0) {
                if (t == quote) quote = 0;
            } else if (t == '"' || t == '\'') {
                quote = t;
            } else if (t == '>') {
                break;
            }
            ++j;
        }
        std::size_t tag_end = (j < n) ? j + 1 : n;

        std::string name;
        for (std::size_t k = name_start; k < std::min(j, n); ++k) {
            char t = body_html[k];
            if (std::isalnum(static_cast<unsigned char>(t))) {
                name += static_cast<char>(std::tolower(static_cast<unsigned char>(t)));
            } else {
                break;
            }
        }

        bool self_closing = j > name_start && j <= n && j >= 1 && body_html[j - 1] == '/';
        if (code_depth == 0) {
            result.plain += ' ';
        } else if (name == "br") {
            current_span += '\n';
        }

        if (name.empty() || name[0] == '!') {
            i = tag_end;
            continue;
        }

        if (closing) {
            // Pop to the matching open tag, auto-closing anything above it.
            auto it = open_tags.rbegin();
            bool found = false;
            for (; it != open_tags.rend(); ++it) {
                if (*it == name) {
                    found = true;
                    break;
                }
            }
            if (found) {
                while (!open_tags.empty()) {
                    std::string top = open_tags.back();
                    open_tags.pop_back();
                    close_one(top);
                    if (top == name) break;
                }
            } // else: stray close, ignore
        } else if (!self_closing && !detail::is_void_element(name)) {
            open_tags.push_back(name);
            if (name == "pre") {
                ++pre_depth;
            } else if (name == "code") {
                if (pre_depth > 0) result.block_code = true;
                ++code_depth;
            }
        }
        i = tag_end;
    }

    // Auto-close whatever is still open.
    while (!open_tags.empty()) {
        std::string top = open_tags.back();
        open_tags.pop_back();
        close_one(top);
    }
    return result;
}

/// True iff the body contains a <code> element nested (at any depth) inside <pre>.
inline bool has_block_code(std::string_view body_html) {
    return strip(body_html).block_code;
}

} // namespace codeneed::html
