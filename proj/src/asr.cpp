// Copyright 2026 The dither-codec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dcodec/asr.hpp"

#include "dcodec/text.hpp"

#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <fstream>
#include <iterator>
#include <system_error>
#include <thread>

namespace dcodec {
namespace {

struct RunOutcome {
  bool timed_out = false;
  bool spawned = true;
  int exit_code = 0;
};

RunOutcome run_shell(const std::string& command, const std::filesystem::path& cwd,
                     double timeout_s) {
  const std::string dir = cwd.empty() ? std::string() : cwd.string();
  const pid_t pid = fork();
  if (pid < 0) return {false, false, -1};
  if (pid == 0) {
    // Child: own process group so a timeout can take down the whole pipeline.
    setpgid(0, 0);
    if (!dir.empty() && chdir(dir.c_str()) != 0) _exit(126);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(timeout_s));
  for (;;) {
    int status = 0;
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) {
      RunOutcome out;
      out.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
      return out;
    }
    if (r < 0 && errno != EINTR) return {false, false, -1};
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      return {true, true, -1};
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
}

std::string rstrip(std::string s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\n' || s.back() == '\r' ||
                        s.back() == '\t' || s.back() == '\f' || s.back() == '\v')) {
    s.pop_back();
  }
  return s;
}

}  // namespace

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += "'";
  return out;
}

std::string expand_command(const std::string& tmpl, const std::filesystem::path& in,
                           const std::filesystem::path& out) {
  std::string cmd;
  bool saw_out = false;
  for (std::size_t i = 0; i < tmpl.size();) {
    if (tmpl.compare(i, 4, "{in}") == 0) {
      cmd += shell_quote(in.string());
      i += 4;
    } else if (tmpl.compare(i, 5, "{out}") == 0) {
      cmd += shell_quote(out.string());
      saw_out = true;
      i += 5;
    } else {
      cmd += tmpl[i++];
    }
  }
  if (!saw_out) cmd = "( " + cmd + " ) > " + shell_quote(out.string());
  return cmd;
}

Transcript transcribe(const AsrClient& client, const std::filesystem::path& wav,
                      std::optional<std::filesystem::path> out) {
  Transcript t;
  if (client.command_template.empty()) {
    t.failure = "empty ASR command";
    return t;
  }
  std::error_code ec;
  if (!std::filesystem::exists(wav, ec)) {
    t.failure = "input '" + wav.string() + "' does not exist";
    return t;
  }
  const std::filesystem::path out_path =
      out ? *out : std::filesystem::path(wav).replace_extension(".txt");
  const std::filesystem::path in_abs = std::filesystem::absolute(wav, ec);
  const std::filesystem::path out_abs = std::filesystem::absolute(out_path, ec);
  const std::string command = expand_command(client.command_template, in_abs, out_abs);

  for (int attempt = 1; attempt <= 2; ++attempt) {
    t.attempts = attempt;
    std::filesystem::remove(out_abs, ec);
    const RunOutcome run = run_shell(command, client.working_dir, client.timeout_s);
    if (!run.spawned) {
      t.failure = "could not start ASR process";
      return t;
    }
    if (run.timed_out) {
      t.failure = "ASR timed out after " + std::to_string(client.timeout_s) + " s";
      return t;
    }
    if (run.exit_code != 0) {
      t.failure = "ASR exited with status " + std::to_string(run.exit_code);
      continue;
    }
    std::ifstream in(out_abs, std::ios::binary);
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    t.raw = rstrip(std::move(raw));
    if (t.raw.empty()) {
      t.failure = "empty transcript";
      return t;
    }
    t.text = normalize_transcript(t.raw);
    t.ok = true;
    t.failure.clear();
    return t;
  }
  return t;
}

}  // namespace dcodec
