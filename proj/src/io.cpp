#include "boundedrank/io.hpp"

#include <fstream>
#include <sstream>

#include "boundedrank/errors.hpp"

namespace boundedrank {

namespace {

using nlohmann::ordered_json;

struct Line {
    int number;
    std::string text;
};

bool is_blank(const std::string& s) { return s.find_first_not_of(" \t") == std::string::npos; }

// Reads "keyword a b ..." with exactly `count` non-negative integers.
std::vector<long long> header(const Line& line, const std::string& keyword, std::size_t count) {
    std::istringstream ss(line.text);
    std::string word;
    ss >> word;
    if (word != keyword) throw ParseError(line.number, "expected '" + keyword + "', got '" + line.text + "'");
    std::vector<long long> out;
    std::string tok;
    while (ss >> tok) {
        if (tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 9)
            throw ParseError(line.number, "'" + tok + "' is not a non-negative integer");
        out.push_back(std::stoll(tok));
    }
    if (out.size() != count)
        throw ParseError(line.number, "'" + keyword + "' takes " + std::to_string(count) + " number(s)");
    return out;
}

}  // namespace

MatSpace parse_mspace(std::istream& in) {
    std::vector<Line> lines;
    std::string text;
    for (int number = 1; std::getline(in, text); ++number) {
        while (!text.empty() && (text.back() == '\r' || text.back() == ' ' || text.back() == '\t')) text.pop_back();
        const auto first = text.find_first_not_of(" \t");
        if (first != std::string::npos && text[first] == '#') continue;
        lines.push_back({number, text});
    }
    std::size_t at = 0;
    auto header_line = [&](const char* what) -> const Line& {
        if (at >= lines.size())
            throw ParseError(lines.empty() ? 1 : lines.back().number + 1, std::string("missing '") + what + "' line");
        return lines[at++];
    };

    const Line& l1 = header_line("mspace");
    if (header(l1, "mspace", 1)[0] != 1) throw ParseError(l1.number, "unsupported format version");
    const Line& l2 = header_line("field");
    const long long order = header(l2, "field", 1)[0];
    std::optional<Field> field;
    try {
        field.emplace(static_cast<int>(order));
    } catch (const UnsupportedField& e) {
        throw ParseError(l2.number, e.what());
    }
    const Line& l3 = header_line("shape");
    const auto shape = header(l3, "shape", 2);
    const std::size_t n = static_cast<std::size_t>(shape[0]), p = static_cast<std::size_t>(shape[1]);
    if (n == 0 || p == 0 || n > 16 || p > 16) throw ParseError(l3.number, "shape must lie between 1 and 16");
    const Line& l4 = header_line("dim");
    const std::size_t d = static_cast<std::size_t>(header(l4, "dim", 1)[0]);
    if (d > n * p) throw ParseError(l4.number, "dim exceeds n*p");

    std::vector<Mat> mats;
    MatSpace span(*field, n, p);
    Mat cur(*field, n, p);
    std::size_t rows = 0;
    int block_start = 0;
    auto close_block = [&](int line_no) {
        if (rows == 0) return;
        if (rows != n)
            throw ParseError(line_no, "matrix has " + std::to_string(rows) + " rows, expected " + std::to_string(n));
        mats.push_back(cur);
        MatSpace next = MatSpace::from_spanning(*field, n, p, mats);
        if (next.dim() != mats.size())
            throw ParseError(block_start, "matrix " + std::to_string(mats.size()) + " is a combination of the previous ones");
        span = std::move(next);
        rows = 0;
    };
    for (; at < lines.size(); ++at) {
        const Line& line = lines[at];
        if (is_blank(line.text)) {
            close_block(line.number);
            continue;
        }
        if (rows == n) throw ParseError(line.number, "matrix has more than " + std::to_string(n) + " rows");
        if (rows == 0) block_start = line.number;
        std::istringstream ss(line.text);
        std::string tok;
        std::size_t j = 0;
        while (ss >> tok) {
            if (tok.size() != 1 || tok[0] < '0' || tok[0] - '0' >= order)
                throw ParseError(line.number, "'" + tok + "' is not a digit below " + std::to_string(order));
            if (j >= p) throw ParseError(line.number, "row has more than " + std::to_string(p) + " entries");
            cur(rows, j++) = static_cast<Digit>(tok[0] - '0');
        }
        if (j != p) throw ParseError(line.number, "row has " + std::to_string(j) + " entries, expected " + std::to_string(p));
        ++rows;
    }
    const int end = lines.empty() ? 1 : lines.back().number;
    close_block(end);
    if (mats.size() != d)
        throw ParseError(end, "declared dim " + std::to_string(d) + " but found " + std::to_string(mats.size()) +
                                  " matrices");
    return span;
}

MatSpace parse_mspace(const std::string& text) {
    std::istringstream in(text);
    return parse_mspace(in);
}

MatSpace read_mspace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open " + path);
    return parse_mspace(in);
}

std::string digit_string(std::span<const Digit> digits) {
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i) out += ' ';
        out += static_cast<char>('0' + digits[i]);
    }
    return out;
}

std::string format_mspace(const MatSpace& v) {
    std::ostringstream out;
    out << "mspace 1\nfield " << v.field().order() << "\nshape " << v.rows() << ' ' << v.cols() << "\ndim "
        << v.dim() << '\n';
    for (const Mat& m : v.basis()) {
        out << '\n';
        for (std::size_t i = 0; i < m.rows(); ++i) out << digit_string(m.row(i)) << '\n';
    }
    return out.str();
}

ordered_json mat_json(const Mat& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(digit_string(m.row(i)));
    return rows;
}

ordered_json witness_json(const EquivalenceWitness& w) {
    return ordered_json{{"P", mat_json(w.P)}, {"Q", mat_json(w.Q)}, {"transposed", w.transposed}};
}

ordered_json space_json(const MatSpace& v) {
    ordered_json basis = ordered_json::array();
    for (const Mat& m : v.basis()) basis.push_back(mat_json(m));
    return ordered_json{{"field", v.field().order()}, {"shape", {v.rows(), v.cols()}}, {"dim", v.dim()},
                        {"basis", basis}};
}

namespace {

ordered_json vectors_json(const std::optional<VecSpace>& s) {
    if (!s) return nullptr;
    ordered_json out = ordered_json::array();
    for (const Vec& v : s->basis()) out.push_back(digit_string(v));
    return out;
}

ordered_json labels_json(const std::vector<Label>& labels) {
    ordered_json out = ordered_json::array();
    for (Label l : labels) out.push_back(to_string(l));
    return out;
}

}  // namespace

ordered_json classification_json(const MatSpace& v, std::size_t r, const ClassificationResult& res) {
    ordered_json out;
    out["field"] = v.field().order();
    out["shape"] = {v.rows(), v.cols()};
    out["dim"] = v.dim();
    out["r"] = r;
    out["threshold"] = res.threshold;
    out["labels"] = labels_json(res.labels);
    out["image"] = vectors_json(res.image);
    out["kernel"] = vectors_json(res.kernel);
    ordered_json w = ordered_json::object();
    if (res.primitive_col) w["PrimitiveCol"] = witness_json(*res.primitive_col);
    if (res.primitive_row) w["PrimitiveRow"] = witness_json(*res.primitive_row);
    if (res.exceptional) w["ExceptionalJ3"] = witness_json(*res.exceptional);
    out["witnesses"] = w;
    return out;
}

ordered_json census_json(const std::vector<ClassCensus>& classes) {
    ordered_json out = ordered_json::array();
    for (const ClassCensus& c : classes)
        out.push_back(ordered_json{{"representative", space_json(c.representative)},
                                   {"size", c.size},
                                   {"labels", labels_json(c.labels)}});
    return out;
}

ordered_json campaign_json(const CampaignReport& rep) {
    const CampaignSpec& s = rep.spec;
    ordered_json out;
    out["theorem"] = to_string(s.theorem);
    out["n"] = s.n;
    out["p"] = s.p;
    out["r"] = s.r;
    out["field"] = s.order;
    out["target_dim"] = s.target_dim;
    out["mode"] = to_string(s.mode);
    out["samples"] = s.mode == Mode::Sampled ? ordered_json(s.samples) : ordered_json(nullptr);
    out["seed"] = s.seed ? ordered_json(*s.seed) : ordered_json(nullptr);
    out["budget"] = s.budget;
    out["pass"] = rep.pass();
    out["visited"] = rep.visited;
    out["survivors"] = rep.survivors;
    out["label_census"] = rep.label_census;
    out["counters"] = rep.counters;
    out["classes"] = census_json(rep.classes);
    ordered_json viol = ordered_json::array();
    for (const MatSpace& v : rep.violations) viol.push_back(space_json(v)["basis"]);
    out["violations"] = viol;
    out["elapsed_seconds"] = rep.elapsed_seconds;
    return out;
}

}  // namespace boundedrank
