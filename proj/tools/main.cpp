#include <csignal>
#include <iostream>

#include "thdas/cli.hpp"

namespace {

extern "C" void on_signal(int) { thdas::cli_stop_flag().store(true); }

}  // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    return thdas::run_cli(argc, argv, std::cout, std::cerr);
}
