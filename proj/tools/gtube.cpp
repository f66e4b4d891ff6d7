#include <gtube/cli.hpp>

int main(int argc, char** argv) { return gtube::run_cli(argc, argv); }
