#include "phishscope/csv.hpp"

namespace phishscope {

bool CsvReader::next(std::vector<std::string>& fields) {
    fields.clear();
    malformed_ = false;

    std::streambuf* buf = in_.rdbuf();
    using traits = std::char_traits<char>;
    if (traits::eq_int_type(buf->sgetc(), traits::eof())) return false;

    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    while (true) {
        const auto ci = buf->sbumpc();
        if (traits::eq_int_type(ci, traits::eof())) {
            if (in_quotes) malformed_ = true;
            fields.push_back(std::move(field));
            break;
        }
        const char c = traits::to_char_type(ci);
        if (in_quotes) {
            if (c == '"') {
                if (traits::eq_int_type(buf->sgetc(), traits::to_int_type('"'))) {
                    buf->sbumpc();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            field_was_quoted = false;
        } else if (c == '\n') {
            fields.push_back(std::move(field));
            break;
        } else if (c == '\r') {
            if (traits::eq_int_type(buf->sgetc(), traits::to_int_type('\n'))) buf->sbumpc();
            fields.push_back(std::move(field));
            break;
        } else if (c == '"') {
            if (field.empty() && !field_was_quoted) {
                in_quotes = true;
                field_was_quoted = true;
            } else {
                malformed_ = true;
                field.push_back(c);
            }
        } else {
            if (field_was_quoted) malformed_ = true;
            field.push_back(c);
        }
    }
    ++records_;
    return true;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace phishscope
