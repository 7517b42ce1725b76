#include <bsroots/cli.hpp>

int main(int argc, char** argv) { return bsroots::cli::run(argc, argv, std::cout, std::cerr); }
