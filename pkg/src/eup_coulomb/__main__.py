from src.eup_coulomb.cli import main

main()
