"""径向波函数测试包"""
