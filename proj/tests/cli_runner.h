// Helpers for driving the command-line binary from tests.
#ifndef SPORTSNEWS_TESTS_CLI_RUNNER_H_
#define SPORTSNEWS_TESTS_CLI_RUNNER_H_

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace cli {

namespace fs = std::filesystem;

// Fresh scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string &name)
      : path_(fs::temp_directory_path() /
              ("sportsnews_" + name + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string &file) const { return (path_ / file).string(); }

 private:
  fs::path path_;
};

// Runs the binary with `args` (already shell-quoted); stderr goes to `log`.
inline int Run(const std::string &args, const std::string &log = "/dev/null") {
  const std::string cmd = std::string(CLI_PATH) + " " + args + " >/dev/null 2>" + log;
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

inline std::string Slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void Write(const std::string &path, const std::string &text) {
  std::ofstream(path, std::ios::binary) << text;
}

}  // namespace cli

#endif  // SPORTSNEWS_TESTS_CLI_RUNNER_H_
