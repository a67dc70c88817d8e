#include "process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <csignal>
#include <cerrno>
#include <cstring>
#include <stdexcept>
#include <system_error>

extern char** environ;

namespace patmine::detail {

namespace {

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  Fd(Fd&& o) noexcept : fd_(o.release()) {}
  Fd& operator=(Fd&& o) noexcept {
    reset(o.release());
    return *this;
  }
  ~Fd() { reset(); }

  [[nodiscard]] int get() const { return fd_; }
  int release() {
    int fd = fd_;
    fd_ = -1;
    return fd;
  }
  void reset(int fd = -1) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = fd;
  }

 private:
  int fd_ = -1;
};

std::array<Fd, 2> make_pipe() {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) {
    throw std::system_error(errno, std::generic_category(), "pipe2");
  }
  return {Fd(fds[0]), Fd(fds[1])};
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv,
                          std::string_view stdin_data) {
  if (argv.empty()) throw std::invalid_argument("run_process: empty argv");
  // A child that exits before consuming stdin must not kill us.
  static const bool sigpipe_ignored = [] {
    std::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;

  auto in = make_pipe();
  auto out = make_pipe();
  auto err = make_pipe();

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in[0].get(), STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out[1].get(), STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err[1].get(), STDERR_FILENO);

  std::vector<char*> args;
  args.reserve(argv.size() + 1);
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = 0;
  int rc = ::posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    throw std::system_error(rc, std::generic_category(), "spawn " + argv[0]);
  }

  in[0].reset();
  out[1].reset();
  err[1].reset();
  if (stdin_data.empty()) in[1].reset();
  if (in[1].get() >= 0) ::fcntl(in[1].get(), F_SETFL, O_NONBLOCK);

  ProcessResult result;
  std::size_t written = 0;
  std::array<char, 65536> buf;
  while (out[0].get() >= 0 || err[0].get() >= 0 || in[1].get() >= 0) {
    std::array<pollfd, 3> pfds{};
    nfds_t n = 0;
    int out_slot = -1, err_slot = -1, in_slot = -1;
    if (out[0].get() >= 0) {
      out_slot = static_cast<int>(n);
      pfds[n++] = {out[0].get(), POLLIN, 0};
    }
    if (err[0].get() >= 0) {
      err_slot = static_cast<int>(n);
      pfds[n++] = {err[0].get(), POLLIN, 0};
    }
    if (in[1].get() >= 0) {
      in_slot = static_cast<int>(n);
      pfds[n++] = {in[1].get(), POLLOUT, 0};
    }
    if (::poll(pfds.data(), n, -1) < 0) {
      if (errno == EINTR) continue;
      throw std::system_error(errno, std::generic_category(), "poll");
    }
    auto drain = [&](int slot, Fd& fd, std::string& sink) {
      if (slot < 0 || pfds[slot].revents == 0) return;
      ssize_t got = ::read(fd.get(), buf.data(), buf.size());
      if (got > 0) {
        sink.append(buf.data(), static_cast<std::size_t>(got));
      } else if (got == 0 || (errno != EINTR && errno != EAGAIN)) {
        fd.reset();
      }
    };
    drain(out_slot, out[0], result.out);
    drain(err_slot, err[0], result.err);
    if (in_slot >= 0 && pfds[in_slot].revents != 0) {
      if (pfds[in_slot].revents & (POLLERR | POLLHUP)) {
        in[1].reset();
      } else {
        ssize_t put = ::write(in[1].get(), stdin_data.data() + written,
                              stdin_data.size() - written);
        if (put > 0) written += static_cast<std::size_t>(put);
        else if (errno != EAGAIN && errno != EINTR) in[1].reset();
        if (written == stdin_data.size()) in[1].reset();
      }
    }
  }

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw std::system_error(errno, std::generic_category(), "waitpid");
  }
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return result;
}

}  // namespace patmine::detail
