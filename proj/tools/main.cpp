#include "app.hpp"

int main(int argc, char** argv) { return rubricbench::cli::run(argc, argv); }
