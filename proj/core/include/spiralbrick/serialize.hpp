#pragma once

#include <spiralbrick/column.hpp>
#include <spiralbrick/executor.hpp>

#include <filesystem>
#include <string>

namespace spiralbrick {

/// Versioned JSON documents with stable key order, so identical inputs
/// produce byte-identical files.

std::string model_to_json(const ColumnModel& model);
ColumnModel model_from_json(const std::string& text);

std::string log_to_json(const AssemblyLog& log);
AssemblyLog log_from_json(const std::string& text);

void save_text(const std::filesystem::path& path, const std::string& text);
std::string load_text(const std::filesystem::path& path);

}  // namespace spiralbrick
