#include "ceep/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "ceep/error.hpp"

namespace ceep {

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string> fields;
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < text.size()) {
                lines.push_back(text.substr(start));
            }
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

// Whitespace-separated fields of non-blank lines with '#' comments removed.
std::vector<Line> tokenized_lines(std::string_view text) {
    std::vector<Line> out;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        std::istringstream in{std::string(line)};
        Line parsed{i + 1, {}};
        std::string field;
        while (in >> field) {
            parsed.fields.push_back(field);
        }
        if (!parsed.fields.empty()) {
            out.push_back(std::move(parsed));
        }
    }
    return out;
}

double parse_number(std::string_view s) {
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError(0, "invalid number '" + std::string(s) + "'");
    }
    if (!std::isfinite(value)) {
        throw ParseError(0, "non-finite number '" + std::string(s) + "'");
    }
    return value;
}

std::size_t parse_index(std::string_view s) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError(0, "invalid index '" + std::string(s) + "'");
    }
    return value;
}

template <typename F>
auto at_line(std::size_t line, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ParseError& e) {
        if (e.line() != 0) {
            throw;
        }
        throw ParseError(line, e.what());
    } catch (const DomainError& e) {
        throw ParseError(line, e.what());
    }
}

}  // namespace

Complex parse_complex(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (c != ' ' && c != '\t' && c != '\r') {
            s.push_back(c);
        }
    }
    if (s.empty()) {
        throw ParseError(0, "empty complex literal");
    }
    if (s.back() != 'i') {
        return {parse_number(s), 0.0};
    }
    const std::string_view body(s.data(), s.size() - 1);
    // the last sign that is not an exponent sign separates real and imaginary parts
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    auto imaginary = [](std::string_view part) {
        if (part.empty() || part == "+") {
            return 1.0;
        }
        if (part == "-") {
            return -1.0;
        }
        return parse_number(part);
    };
    try {
        if (split == std::string_view::npos) {
            return {0.0, imaginary(body)};
        }
        return {parse_number(body.substr(0, split)), imaginary(body.substr(split))};
    } catch (const ParseError&) {
        throw ParseError(0, "invalid complex literal '" + std::string(text) + "'");
    }
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_complex(Complex z) {
    return format_real(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + format_real(std::abs(z.imag())) + "i";
}

ComplexVector parse_complex_list(std::string_view text) {
    ComplexVector out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        const auto cell = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
        out.push_back(parse_complex(cell));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

WeightedDigraph parse_edge_list(std::string_view text) {
    const auto lines = tokenized_lines(text);
    if (lines.empty()) {
        throw ParseError(0, "edge list: missing header '<n> <directed|undirected>'");
    }
    const Line& header = lines.front();
    if (header.fields.size() != 2) {
        throw ParseError(header.number, "edge list header must be '<n> <directed|undirected>'");
    }
    const std::size_t n = at_line(header.number, [&] { return parse_index(header.fields[0]); });
    bool directed = false;
    if (header.fields[1] == "directed") {
        directed = true;
    } else if (header.fields[1] != "undirected") {
        throw ParseError(header.number, "directedness must be 'directed' or 'undirected', got '" + header.fields[1] + "'");
    }
    if (n == 0) {
        throw ParseError(header.number, "vertex count must be positive");
    }

    std::vector<Edge> edges;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> first_seen;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const Line& line = lines[k];
        if (line.fields.size() != 3 && line.fields.size() != 4) {
            throw ParseError(line.number, "expected '<src> <dst> <re> <im>' or '<src> <dst> <a+bi>'");
        }
        Edge e = at_line(line.number, [&] {
            Edge parsed;
            parsed.src = parse_index(line.fields[0]);
            parsed.dst = parse_index(line.fields[1]);
            parsed.weight = line.fields.size() == 4
                                ? Complex(parse_number(line.fields[2]), parse_number(line.fields[3]))
                                : parse_complex(line.fields[2]);
            return parsed;
        });
        if (e.src >= n || e.dst >= n) {
            throw ParseError(line.number, "vertex index out of range (n = " + std::to_string(n) + ")");
        }
        if (e.src == e.dst) {
            throw ParseError(line.number, "self-loop " + std::to_string(e.src) + " -> " + std::to_string(e.dst));
        }
        const auto key = directed ? std::pair{e.src, e.dst} : std::pair{std::min(e.src, e.dst), std::max(e.src, e.dst)};
        if (const auto [it, fresh] = first_seen.emplace(key, line.number); !fresh) {
            throw ValidationError("line " + std::to_string(line.number) + ": duplicate edge " + std::to_string(e.src) +
                                  " -> " + std::to_string(e.dst) + " (first on line " + std::to_string(it->second) +
                                  ")");
        }
        edges.push_back(e);
    }
    return WeightedDigraph(n, std::move(edges), directed);
}

std::string write_edge_list(const WeightedDigraph& g) {
    std::string out = std::to_string(g.order()) + (g.directed() ? " directed\n" : " undirected\n");
    for (const auto& e : g.edges()) {
        out += std::to_string(e.src) + " " + std::to_string(e.dst) + " " + format_real(e.weight.real()) + " " +
               format_real(e.weight.imag()) + "\n";
    }
    return out;
}

ComplexMatrix parse_matrix_csv(std::string_view text) {
    std::vector<std::vector<Complex>> rows;
    const auto lines = split_lines(text);
    std::size_t cols = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty()) {
            continue;
        }
        auto row = at_line(i + 1, [&] { return parse_complex_list(line); });
        if (rows.empty()) {
            cols = row.size();
        } else if (row.size() != cols) {
            throw ParseError(i + 1, "ragged row: " + std::to_string(row.size()) + " cells, expected " +
                                        std::to_string(cols));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError(0, "matrix CSV: no rows");
    }
    std::vector<Complex> entries;
    entries.reserve(rows.size() * cols);
    for (auto& r : rows) {
        entries.insert(entries.end(), r.begin(), r.end());
    }
    return ComplexMatrix(rows.size(), cols, std::move(entries));
}

std::string write_matrix_csv(const ComplexMatrix& m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out += ',';
            }
            out += format_complex(m(i, j));
        }
        out += '\n';
    }
    return out;
}

BranchNetwork parse_branch_list(std::string_view text) {
    const auto lines = tokenized_lines(text);
    if (lines.empty() || lines.front().fields.size() != 2 || lines.front().fields[0] != "buses") {
        throw ParseError(lines.empty() ? 0 : lines.front().number, "branch list must start with 'buses <n>'");
    }
    BranchNetwork net;
    net.bus_count = at_line(lines.front().number, [&] { return parse_index(lines.front().fields[1]); });
    if (net.bus_count == 0) {
        throw ParseError(lines.front().number, "bus count must be positive");
    }
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const Line& line = lines[k];
        if (line.fields.size() != 5) {
            throw ParseError(line.number, "expected '<from> <to> <r> <x> <b>'");
        }
        Branch b = at_line(line.number, [&] {
            return Branch{parse_index(line.fields[0]), parse_index(line.fields[1]), parse_number(line.fields[2]),
                          parse_number(line.fields[3]), parse_number(line.fields[4])};
        });
        if (b.from_bus < 1 || b.from_bus > net.bus_count || b.to_bus < 1 || b.to_bus > net.bus_count) {
            throw ParseError(line.number, "bus index out of range 1.." + std::to_string(net.bus_count));
        }
        if (b.from_bus == b.to_bus) {
            throw ParseError(line.number, "branch connects bus " + std::to_string(b.from_bus) + " to itself");
        }
        if (b.resistance == 0.0 && b.reactance == 0.0) {
            throw ParseError(line.number, "zero-impedance branch");
        }
        net.branches.push_back(b);
    }
    return net;
}

namespace {

Complex series_admittance(const Branch& b) {
    if (b.resistance == 0.0 && b.reactance == 0.0) {
        throw DomainError("branch " + std::to_string(b.from_bus) + "-" + std::to_string(b.to_bus) +
                          " has zero impedance");
    }
    return 1.0 / Complex(b.resistance, b.reactance);
}

void check_buses(const Branch& b, std::size_t bus_count) {
    if (b.from_bus < 1 || b.from_bus > bus_count || b.to_bus < 1 || b.to_bus > bus_count || b.from_bus == b.to_bus) {
        throw DomainError("branch " + std::to_string(b.from_bus) + "-" + std::to_string(b.to_bus) +
                          " has invalid buses for a " + std::to_string(bus_count) + "-bus network");
    }
}

}  // namespace

ComplexMatrix ybus_from_branches(const std::vector<Branch>& branches, std::size_t bus_count, ShuntModel shunts) {
    ComplexMatrix y(bus_count, bus_count);
    for (const auto& b : branches) {
        check_buses(b, bus_count);
        const Complex ys = series_admittance(b);
        const Complex half_charging =
            shunts == ShuntModel::include_charging ? Complex(0.0, b.charging / 2.0) : Complex{};
        const std::size_t i = b.from_bus - 1;
        const std::size_t j = b.to_bus - 1;
        y(i, i) += ys + half_charging;
        y(j, j) += ys + half_charging;
        y(i, j) -= ys;
        y(j, i) -= ys;
    }
    return y;
}

WeightedDigraph graph_from_branches(const std::vector<Branch>& branches, std::size_t bus_count) {
    std::map<std::pair<std::size_t, std::size_t>, Complex> merged;
    for (const auto& b : branches) {
        check_buses(b, bus_count);
        const std::size_t i = b.from_bus - 1;
        const std::size_t j = b.to_bus - 1;
        merged[{std::min(i, j), std::max(i, j)}] += series_admittance(b);
    }
    std::vector<Edge> edges;
    for (const auto& [key, w] : merged) {
        edges.push_back({key.first, key.second, w});
    }
    return WeightedDigraph(bus_count, std::move(edges), false);
}

std::string write_trajectory_csv(const FlowResult& result) {
    const std::size_t n = result.states.empty() ? 0 : result.states.front().size();
    std::string out = "t";
    for (std::size_t i = 1; i <= n; ++i) {
        out += ",re_x" + std::to_string(i) + ",im_x" + std::to_string(i);
    }
    out += ",disagreement\n";
    for (std::size_t k = 0; k < result.times.size(); ++k) {
        out += format_real(result.times[k]);
        for (const auto& x : result.states[k]) {
            out += ',' + format_real(x.real()) + ',' + format_real(x.imag());
        }
        out += ',' + format_real(result.disagreement.at(k)) + '\n';
    }
    return out;
}

TrajectoryTable parse_trajectory_csv(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) {
        throw ParseError(0, "trajectory CSV: missing header");
    }
    auto split_cells = [](std::string_view line) {
        std::vector<std::string_view> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
            if (comma == std::string_view::npos) {
                return cells;
            }
            start = comma + 1;
        }
    };
    const auto header = split_cells(trim(lines.front()));
    if (header.size() < 2 || header.front() != "t" || header.back() != "disagreement" || header.size() % 2 != 0) {
        throw ParseError(1, "trajectory header must be t,re_x1,im_x1,...,disagreement");
    }
    const std::size_t n = (header.size() - 2) / 2;
    TrajectoryTable table;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty()) {
            continue;
        }
        const auto cells = split_cells(line);
        if (cells.size() != header.size()) {
            throw ParseError(i + 1, "expected " + std::to_string(header.size()) + " cells");
        }
        at_line(i + 1, [&] {
            table.times.push_back(parse_number(cells[0]));
            ComplexVector x(n);
            for (std::size_t k = 0; k < n; ++k) {
                x[k] = {parse_number(cells[1 + 2 * k]), parse_number(cells[2 + 2 * k])};
            }
            table.states.push_back(std::move(x));
            table.disagreement.push_back(parse_number(cells.back()));
            return 0;
        });
    }
    return table;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(0, "cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace ceep
