#pragma once
// Spawns the command-line tool and captures stdout plus the exit code.
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace cli {

struct Result {
  int exit_code = -1;
  std::string out;

  nlohmann::ordered_json json() const { return nlohmann::ordered_json::parse(out); }
  // The body without config/wall-time: what determinism is about.
  std::string report() const {
    const auto j = json();
    return j.contains("report") ? j["report"].dump() : std::string("null");
  }
};

inline Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + ORTHO_LAB_EXE + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  Result r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace cli
