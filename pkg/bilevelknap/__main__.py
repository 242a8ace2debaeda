from bilevelknap.cli import main

main()
