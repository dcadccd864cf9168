#include "hofent/cli.hpp"

int main(int argc, char** argv) { return hofent::cli::run(argc, argv); }
