from fqlab.cli import main

main()
