#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "appmin/core.hpp"

namespace appmin::trace_io {

// Column order of every trace file. Absent quantities are empty fields.
inline constexpr const char* kTraceHeader = "k,eval_count,err_sq,f_best,m_hat,sigma2_k,wall_ms";

/// Writes `# key: value` provenance lines, then the CSV header and rows.
void write_trace(const RunTrace& trace, std::ostream& out, bool include_wall_time = true);
void write_trace(const RunTrace& trace, const std::filesystem::path& path,
                 bool include_wall_time = true);

/// Reads a trace written by write_trace. Iterates x_k are not stored in the
/// file and come back empty.
RunTrace read_trace(std::istream& in);
RunTrace read_trace(const std::filesystem::path& path);

}  // namespace appmin::trace_io
