#include "mval/dataset.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mval {

namespace {

void check_rows(const std::vector<Features>& rows, const std::vector<std::size_t>& arities, const char* what) {
    for (const auto& r : rows) {
        if (r.size() != arities.size()) throw InvalidArgument(std::string(what) + ": row width differs from arity count");
        for (std::size_t f = 0; f < r.size(); ++f) {
            if (r[f] < 0 || static_cast<std::size_t>(r[f]) >= arities[f]) {
                throw InvalidArgument(std::string(what) + ": code outside its arity");
            }
        }
    }
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find('\t', start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

std::size_t parse_count(const std::string& s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw InvalidArgument("bad integer field '" + s + "'");
    return v;
}

Label parse_label(const std::string& s) {
    if (s == "0") return Label::negative;
    if (s == "1") return Label::positive;
    throw InvalidArgument("label must be 0 or 1, got '" + s + "'");
}

void append_row(std::ostringstream& out, const Features& r) {
    for (std::size_t f = 0; f < r.size(); ++f) {
        if (f) out << '\t';
        out << r[f];
    }
}

void append_arities(std::ostringstream& out, const std::vector<std::size_t>& a) {
    for (std::size_t f = 0; f < a.size(); ++f) {
        if (f) out << '\t';
        out << a[f];
    }
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) throw InvalidArgument("dataset file has no header");
    return lines;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

void CategoricalDataset::validate() const {
    if (rows.size() != labels.size()) throw InvalidArgument("rows and labels differ in length");
    check_rows(rows, arities, "dataset");
}

void TwoViewDataset::validate() const {
    if (view1.size() != labels.size() || view2.size() != labels.size()) {
        throw InvalidArgument("both views need one row per label");
    }
    check_rows(view1, arities1, "view 1");
    check_rows(view2, arities2, "view 2");
}

std::string dataset_to_text(const CategoricalDataset& d) {
    d.validate();
    std::ostringstream out;
    append_arities(out, d.arities);
    out << '\n';
    for (std::size_t i = 0; i < d.size(); ++i) {
        append_row(out, d.rows[i]);
        out << '\t' << to_int(d.labels[i]) << '\n';
    }
    return out.str();
}

std::string dataset_to_text(const TwoViewDataset& d) {
    d.validate();
    std::ostringstream out;
    append_arities(out, d.arities1);
    out << "\t|\t";
    append_arities(out, d.arities2);
    out << '\n';
    for (std::size_t i = 0; i < d.size(); ++i) {
        append_row(out, d.view1[i]);
        out << "\t|\t";
        append_row(out, d.view2[i]);
        out << '\t' << to_int(d.labels[i]) << '\n';
    }
    return out.str();
}

CategoricalDataset dataset_from_text(const std::string& text) {
    const auto lines = lines_of(text);
    CategoricalDataset d;
    for (const auto& f : split_tabs(lines[0])) d.arities.push_back(parse_count(f));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_tabs(lines[i]);
        if (fields.size() != d.arities.size() + 1) throw InvalidArgument("row " + std::to_string(i) + " has the wrong width");
        Features r;
        for (std::size_t f = 0; f < d.arities.size(); ++f) r.push_back(static_cast<int>(parse_count(fields[f])));
        d.rows.push_back(std::move(r));
        d.labels.push_back(parse_label(fields.back()));
    }
    d.validate();
    return d;
}

TwoViewDataset two_view_dataset_from_text(const std::string& text) {
    const auto lines = lines_of(text);
    TwoViewDataset d;
    const auto header = split_tabs(lines[0]);
    bool second = false;
    for (const auto& f : header) {
        if (f == "|") {
            if (second) throw InvalidArgument("header has more than one view separator");
            second = true;
            continue;
        }
        (second ? d.arities2 : d.arities1).push_back(parse_count(f));
    }
    if (!second) throw InvalidArgument("two-view header needs a '|' separator");
    const std::size_t w1 = d.arities1.size();
    const std::size_t w2 = d.arities2.size();
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_tabs(lines[i]);
        if (fields.size() != w1 + w2 + 2 || fields[w1] != "|") {
            throw InvalidArgument("row " + std::to_string(i) + " has the wrong layout");
        }
        Features r1, r2;
        for (std::size_t f = 0; f < w1; ++f) r1.push_back(static_cast<int>(parse_count(fields[f])));
        for (std::size_t f = 0; f < w2; ++f) r2.push_back(static_cast<int>(parse_count(fields[w1 + 1 + f])));
        d.view1.push_back(std::move(r1));
        d.view2.push_back(std::move(r2));
        d.labels.push_back(parse_label(fields.back()));
    }
    d.validate();
    return d;
}

void write_dataset(const CategoricalDataset& d, const std::filesystem::path& path) { spit(path, dataset_to_text(d)); }
void write_dataset(const TwoViewDataset& d, const std::filesystem::path& path) { spit(path, dataset_to_text(d)); }
CategoricalDataset read_dataset(const std::filesystem::path& path) { return dataset_from_text(slurp(path)); }
TwoViewDataset read_two_view_dataset(const std::filesystem::path& path) {
    return two_view_dataset_from_text(slurp(path));
}

}  // namespace mval
