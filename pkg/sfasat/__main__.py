from sfasat.main import main

main()
