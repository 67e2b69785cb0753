#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>

/// Loads a sweep spec; .yaml/.yml through yaml-cpp, anything else as JSON.
nlohmann::json load_config_file(const std::filesystem::path& path);
