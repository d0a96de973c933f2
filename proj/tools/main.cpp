#include "cli.hpp"

int main(int argc, char** argv) { return qangle::cli::run(argc, argv); }
