#include "git_process.hpp"

#include <future>
#include <sstream>

#include <boost/asio/io_context.hpp>
#include <boost/process.hpp>

#include "gitscale/errors.hpp"

namespace bp = boost::process;

namespace gitscale::detail {
namespace {

boost::filesystem::path git_executable() {
    static const boost::filesystem::path exe = bp::search_path("git");
    if (exe.empty()) throw RepositoryError("git executable not found on PATH");
    return exe;
}

bp::environment git_environment() {
    bp::environment env = boost::this_process::environment();
    env["GIT_TERMINAL_PROMPT"] = "0";
    env["GIT_PAGER"] = "cat";
    env["LC_ALL"] = "C";
    return env;
}

}  // namespace

CommandResult run_git(const std::vector<std::string>& args, const std::string& input) {
    boost::asio::io_context ios;
    std::future<std::string> out;
    std::future<std::string> err;
    CommandResult result;
    try {
        bp::child child(git_executable(), bp::args(args), bp::std_in < boost::asio::buffer(input),
                        bp::std_out > out, bp::std_err > err, git_environment(), ios);
        ios.run();
        child.wait();
        result.exit_code = child.exit_code();
    } catch (const bp::process_error& e) {
        throw RepositoryError(std::string("failed to run git: ") + e.what());
    }
    result.out = out.get();
    result.err = err.get();
    return result;
}

struct BlobReader::Impl {
    bp::opstream in;
    bp::ipstream out;
    bp::child child;

    explicit Impl(const std::filesystem::path& git_dir)
        : child(git_executable(), bp::args({"--git-dir=" + git_dir.string(), "cat-file", "--batch"}),
                bp::std_in < in, bp::std_out > out, bp::std_err > bp::null, git_environment()) {}
};

BlobReader::BlobReader(const std::filesystem::path& git_dir) {
    try {
        impl_ = std::make_unique<Impl>(git_dir);
    } catch (const bp::process_error& e) {
        throw RepositoryError(std::string("failed to start git cat-file: ") + e.what());
    }
}

BlobReader::~BlobReader() {
    if (!impl_) return;
    impl_->in.pipe().close();
    std::error_code ec;
    impl_->child.wait(ec);
}

std::string BlobReader::read(const std::string& object_id) {
    impl_->in << object_id << '\n' << std::flush;
    std::string header;
    if (!std::getline(impl_->out, header)) {
        throw RepositoryError("git cat-file terminated while reading " + object_id);
    }
    std::istringstream fields(header);
    std::string id;
    std::string type;
    std::size_t size = 0;
    fields >> id >> type;
    if (type == "missing" || !(fields >> size)) {
        throw RepositoryError("object not readable: " + object_id + " (" + header + ")");
    }
    std::string body(size, '\0');
    impl_->out.read(body.data(), static_cast<std::streamsize>(size));
    if (static_cast<std::size_t>(impl_->out.gcount()) != size) {
        throw RepositoryError("short read for object " + object_id);
    }
    impl_->out.get();  // trailing newline
    return body;
}

}  // namespace gitscale::detail
