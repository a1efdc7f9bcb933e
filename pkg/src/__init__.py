# boostkit package
