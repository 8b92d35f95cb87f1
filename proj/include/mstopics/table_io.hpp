#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace mstopics {

std::vector<std::string> split(const std::string& line, char delim);

double parse_double(const std::string& field, const std::string& context);

std::ifstream open_for_read(const std::filesystem::path& path);
std::ofstream open_for_write(const std::filesystem::path& path);

// Strips a trailing carriage return so CRLF files parse cleanly.
void chomp(std::string& line);

// Shortest representation that round-trips a double exactly.
std::string format_double(double value);

}  // namespace mstopics
