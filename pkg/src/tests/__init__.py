# https://stackoverflow.com/a/50169991/6242649
