#include "appmin/trace_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "appmin/numeric_text.hpp"

namespace appmin::trace_io {

namespace {

std::string optional_field(const std::optional<double>& value)
{
    return value ? format_double(*value) : std::string();
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

std::optional<double> parse_optional(const std::string& text)
{
    if (text.empty())
        return std::nullopt;
    return parse_double(text);
}

}  // namespace

void write_trace(const RunTrace& trace, std::ostream& out, bool include_wall_time)
{
    out << "# solver: " << trace.solver << '\n';
    out << "# objective: " << trace.objective << '\n';
    out << "# dim: " << trace.dim << '\n';
    out << "# seed: " << trace.seed << '\n';
    for (const auto& [key, value] : trace.provenance)
        out << "# " << key << ": " << value << '\n';
    if (trace.failure) {
        out << "# failure: " << *trace.failure << '\n';
        if (trace.failure_k)
            out << "# failure_k: " << *trace.failure_k << '\n';
    }
    out << kTraceHeader << '\n';
    for (const IterateRecord& rec : trace.records) {
        out << rec.k << ',' << rec.eval_count << ',' << optional_field(rec.err_sq) << ','
            << format_double(rec.f_best) << ',' << optional_field(rec.m_hat) << ','
            << optional_field(rec.sigma2) << ',';
        if (include_wall_time)
            out << format_double(rec.wall_ms);
        out << '\n';
    }
}

void write_trace(const RunTrace& trace, const std::filesystem::path& path, bool include_wall_time)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write trace file " + path.string());
    write_trace(trace, out, include_wall_time);
    if (!out)
        throw Error("failed writing trace file " + path.string());
}

RunTrace read_trace(std::istream& in)
{
    RunTrace trace;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.rfind("# ", 0) == 0) {
            const auto colon = line.find(": ");
            if (colon == std::string::npos)
                continue;
            const std::string key = line.substr(2, colon - 2);
            const std::string value = line.substr(colon + 2);
            if (key == "solver")
                trace.solver = value;
            else if (key == "objective")
                trace.objective = value;
            else if (key == "dim")
                trace.dim = std::stoi(value);
            else if (key == "seed")
                trace.seed = std::stoull(value);
            else if (key == "failure")
                trace.failure = value;
            else if (key == "failure_k")
                trace.failure_k = std::stoi(value);
            else
                trace.provenance[key] = value;
            continue;
        }
        if (!header_seen) {
            if (line != kTraceHeader)
                throw Error("unexpected trace header: " + line);
            header_seen = true;
            continue;
        }
        const std::vector<std::string> f = split_csv(line);
        if (f.size() != 7)
            throw Error("trace row must have 7 fields: " + line);
        IterateRecord rec;
        rec.k = std::stoi(f[0]);
        rec.eval_count = std::stoull(f[1]);
        rec.err_sq = parse_optional(f[2]);
        rec.f_best = parse_double(f[3]);
        rec.m_hat = parse_optional(f[4]);
        rec.sigma2 = parse_optional(f[5]);
        rec.wall_ms = f[6].empty() ? 0.0 : parse_double(f[6]);
        trace.records.push_back(std::move(rec));
    }
    if (!header_seen)
        throw Error("trace has no header row");
    return trace;
}

RunTrace read_trace(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read trace file " + path.string());
    return read_trace(in);
}

}  // namespace appmin::trace_io
