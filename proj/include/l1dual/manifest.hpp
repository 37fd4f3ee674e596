#pragma once

#include <stdexcept>
#include <string>

#include "l1dual/experiments.hpp"

namespace l1dual {

/// Schema or I/O problem with a manifest; the CLI maps it to exit code 2.
class ManifestError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct Manifest {
  ExperimentConfig config;
  std::string output;     // table / solution output path, relative to the working directory
  int verbosity = 1;
  std::string source;     // file the manifest came from
};

/// Parses JSON text; every key is checked and unknown keys are rejected.
Manifest parse_manifest(const std::string& text, const std::string& source = "<string>");
Manifest load_manifest(const std::string& path);

}  // namespace l1dual
