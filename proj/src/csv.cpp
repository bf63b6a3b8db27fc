#include "kh/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>

#include "kh/errors.hpp"

namespace kh {

namespace {

std::string float_str(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw config_error(std::string("csv: bad ") + what + " '" + s + "'");
    return v;
}

std::vector<res_t> parse_digits(const std::string& s, const PrimeField& F) {
    std::vector<res_t> digits;
    if (s.find('-') != std::string::npos) {
        for (const std::string& piece : split(s, '-'))
            digits.push_back(res_t(parse_u64(piece, "digit")));
    } else {
        for (char c : s) {
            if (c < '0' || c > '9') throw config_error(std::string("csv: bad digit '") + c + "'");
            digits.push_back(res_t(c - '0'));
        }
    }
    if (digits.empty()) throw config_error("csv: empty digit string");
    for (res_t d : digits)
        if (d >= F.p()) throw config_error("csv: digit " + std::to_string(d) + " out of range");
    return digits;
}

} // namespace

void write_point_csv(std::ostream& out, const PointDump& dump) {
    out << "# p=" << dump.p << "\n";
    out << "# spec=" << dump.spec_label << "\n";
    out << "# precision=";
    for (std::size_t i = 0; i < dump.precisions.size(); ++i)
        out << (i ? "," : "") << dump.precisions[i];
    out << "\n";
    for (std::size_t r = 0; r < dump.points.size(); ++r) {
        const DigitPoint& pt = dump.points[r];
        out << dump.index[r];
        for (std::size_t d = 0; d < pt.coords.size(); ++d)
            out << "," << pt.digit_string(d) << "," << float_str(pt.value(d));
        out << "\n";
    }
}

PointDump read_point_csv(std::istream& in) {
    PointDump dump;
    bool have_p = false;
    std::string line;
    std::vector<std::string> data;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            std::size_t ws = body.find_first_not_of(' ');
            if (ws != std::string::npos) body = body.substr(ws);
            if (body.rfind("p=", 0) == 0) {
                dump.p = std::uint32_t(parse_u64(body.substr(2), "p"));
                have_p = true;
            } else if (body.rfind("spec=", 0) == 0) {
                dump.spec_label = body.substr(5);
            } else if (body.rfind("precision=", 0) == 0) {
                for (const std::string& piece : split(body.substr(10), ','))
                    dump.precisions.push_back(int(parse_u64(piece, "precision")));
            }
            continue;
        }
        data.push_back(line);
    }
    if (!have_p) throw config_error("csv: missing '# p=' header");
    PrimeField F(dump.p);
    if (data.empty()) throw config_error("csv: no points");

    std::size_t dims = 0;
    for (const std::string& row : data) {
        std::vector<std::string> fields = split(row, ',');
        if (fields.size() < 3 || fields.size() % 2 == 0)
            throw config_error("csv: row with " + std::to_string(fields.size()) + " fields");
        std::size_t row_dims = (fields.size() - 1) / 2;
        if (dims == 0) dims = row_dims;
        if (row_dims != dims) throw config_error("csv: inconsistent dimension count");
        dump.index.push_back(parse_u64(fields[0], "index"));
        DigitPoint pt(F, 0);
        for (std::size_t d = 0; d < dims; ++d)
            pt.coords.push_back(parse_digits(fields[1 + 2 * d], F));
        int prec = int(pt.coords[0].size());
        for (const auto& c : pt.coords) prec = std::min(prec, int(c.size()));
        pt.precision = prec;
        dump.points.push_back(std::move(pt));
    }
    if (dump.precisions.empty())
        for (const auto& c : dump.points[0].coords) dump.precisions.push_back(int(c.size()));
    return dump;
}

} // namespace kh
